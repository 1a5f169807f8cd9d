import pytest

from phonrich.inventory import PhonemeInventory

# 20 hand-verified CMU dictionary entries (with stress digits) and their
# expected stress-free pronunciations
CMUDICT_LINES = """\
ABOUT  AH0 B AW1 T
BLUE  B L UW1
BOOK  B UH1 K
BOY  B OY1
CAT  K AE1 T
DOG  D AO1 G
DON'T  D OW1 N T
GREEN  G R IY1 N
HELLO  HH AH0 L OW1
HELLO(1)  HH EH0 L OW1
HOUSE  HH AW1 S
JUDGE  JH AH1 JH
MEASURE  M EH1 ZH ER0
PHONEME  F OW1 N IY2 M
RED  R EH1 D
SING  S IH1 NG
THING  TH IH1 NG
THIS  DH IH1 S
VOICE  V OY1 S
WATER  W AO1 T ER0
YES  Y EH1 S
"""

EXPECTED_PRONUNCIATIONS = {
    "about": ("AH", "B", "AW", "T"),
    "blue": ("B", "L", "UW"),
    "book": ("B", "UH", "K"),
    "boy": ("B", "OY"),
    "cat": ("K", "AE", "T"),
    "dog": ("D", "AO", "G"),
    "don't": ("D", "OW", "N", "T"),
    "green": ("G", "R", "IY", "N"),
    "hello": ("HH", "AH", "L", "OW"),
    "house": ("HH", "AW", "S"),
    "judge": ("JH", "AH", "JH"),
    "measure": ("M", "EH", "ZH", "ER"),
    "phoneme": ("F", "OW", "N", "IY", "M"),
    "red": ("R", "EH", "D"),
    "sing": ("S", "IH", "NG"),
    "thing": ("TH", "IH", "NG"),
    "this": ("DH", "IH", "S"),
    "voice": ("V", "OY", "S"),
    "water": ("W", "AO", "T", "ER"),
    "yes": ("Y", "EH", "S"),
}


@pytest.fixture
def inventory():
    return PhonemeInventory()


@pytest.fixture
def lexicon_file(tmp_path):
    path = tmp_path / "cmudict.txt"
    path.write_text(CMUDICT_LINES)
    return path
