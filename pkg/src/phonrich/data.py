"""Built-in desk-scale demo vocabulary and corpus generator.

66 common English words with stress-free ARPABET pronunciations covering
all 39 inventory phonemes, mirroring the shape of an isolated-word corpus
(10 repetitions of each word per speaker plus enrollment sentences).
"""

from __future__ import annotations

import numpy as np

from .protocols import UtteranceRecord

# word -> pronunciation; union of all pronunciations covers the full inventory
DEMO_VOCABULARY: dict[str, tuple[str, ...]] = {
    "about": ("AH", "B", "AW", "T"),
    "azure": ("AE", "ZH", "ER"),
    "bird": ("B", "ER", "D"),
    "blue": ("B", "L", "UW"),
    "book": ("B", "UH", "K"),
    "box": ("B", "AA", "K", "S"),
    "boy": ("B", "OY"),
    "cat": ("K", "AE", "T"),
    "chair": ("CH", "EH", "R"),
    "child": ("CH", "AY", "L", "D"),
    "cow": ("K", "AW"),
    "day": ("D", "EY"),
    "dog": ("D", "AO", "G"),
    "door": ("D", "AO", "R"),
    "duck": ("D", "AH", "K"),
    "egg": ("EH", "G"),
    "eight": ("EY", "T"),
    "father": ("F", "AA", "DH", "ER"),
    "fish": ("F", "IH", "SH"),
    "five": ("F", "AY", "V"),
    "frog": ("F", "R", "AA", "G"),
    "go": ("G", "OW"),
    "goat": ("G", "OW", "T"),
    "good": ("G", "UH", "D"),
    "green": ("G", "R", "IY", "N"),
    "hat": ("HH", "AE", "T"),
    "house": ("HH", "AW", "S"),
    "ice": ("AY", "S"),
    "jam": ("JH", "AE", "M"),
    "judge": ("JH", "AH", "JH"),
    "key": ("K", "IY"),
    "king": ("K", "IH", "NG"),
    "lamb": ("L", "AE", "M"),
    "measure": ("M", "EH", "ZH", "ER"),
    "moon": ("M", "UW", "N"),
    "mouse": ("M", "AW", "S"),
    "night": ("N", "AY", "T"),
    "nose": ("N", "OW", "Z"),
    "owl": ("AW", "L"),
    "pen": ("P", "EH", "N"),
    "pig": ("P", "IH", "G"),
    "quick": ("K", "W", "IH", "K"),
    "rain": ("R", "EY", "N"),
    "red": ("R", "EH", "D"),
    "run": ("R", "AH", "N"),
    "ship": ("SH", "IH", "P"),
    "sing": ("S", "IH", "NG"),
    "snow": ("S", "N", "OW"),
    "sun": ("S", "AH", "N"),
    "thing": ("TH", "IH", "NG"),
    "this": ("DH", "IH", "S"),
    "thumb": ("TH", "AH", "M"),
    "toy": ("T", "OY"),
    "tree": ("T", "R", "IY"),
    "under": ("AH", "N", "D", "ER"),
    "up": ("AH", "P"),
    "vision": ("V", "IH", "ZH", "AH", "N"),
    "voice": ("V", "OY", "S"),
    "vote": ("V", "OW", "T"),
    "water": ("W", "AO", "T", "ER"),
    "win": ("W", "IH", "N"),
    "wolf": ("W", "UH", "L", "F"),
    "yard": ("Y", "AA", "R", "D"),
    "yellow": ("Y", "EH", "L", "OW"),
    "yes": ("Y", "EH", "S"),
    "zoo": ("Z", "UW"),
}

N_SENTENCES = 5
N_REPETITIONS = 10


def word_duration(word: str) -> float:
    """Nominal spoken duration in seconds, driven by phoneme count."""
    return 0.25 + 0.08 * len(DEMO_VOCABULARY[word])


def demo_sentences() -> list[str]:
    """Five sentence transcripts whose union covers the whole vocabulary."""
    words = sorted(DEMO_VOCABULARY)
    return [" ".join(words[k::N_SENTENCES]) for k in range(N_SENTENCES)]


def make_demo_inventory(n_speakers: int, seed: int = 0) -> list[UtteranceRecord]:
    """Aplawd-shaped inventory: per speaker, 5 sentences and 66 words x 10 reps.

    Word-recording durations get a small deterministic per-recording jitter
    so net speech is not exactly tied to word identity.
    """
    records = []
    sentences = demo_sentences()
    for s in range(n_speakers):
        spk = f"spk{s:03d}"
        gender = "m" if s % 2 == 0 else "f"
        rng = np.random.default_rng([seed, 97, s])
        for k, text in enumerate(sentences):
            durations = [word_duration(w) for w in text.split()]
            records.append(UtteranceRecord(
                utterance_id=f"{spk}_sent{k}",
                speaker_id=spk,
                kind="sentence",
                net_speech=float(sum(durations)),
                transcript=text,
                gender=gender,
                word_durations=durations,
            ))
        for word in sorted(DEMO_VOCABULARY):
            for rep in range(1, N_REPETITIONS + 1):
                jitter = 1.0 + 0.1 * (rng.random() - 0.5)
                records.append(UtteranceRecord(
                    utterance_id=f"{spk}_{word}_{rep:02d}",
                    speaker_id=spk,
                    kind="word",
                    net_speech=float(word_duration(word) * jitter),
                    transcript=word,
                    word_text=word,
                    repetition_index=rep,
                    gender=gender,
                ))
    return records


def demo_lexicon_lines() -> str:
    """The demo vocabulary rendered as CMU-dictionary text."""
    lines = []
    for word in sorted(DEMO_VOCABULARY):
        lines.append(word.upper() + "  " + " ".join(DEMO_VOCABULARY[word]))
    return "\n".join(lines) + "\n"
