"""Letters, non-associative words, and exact tree polynomials.

A non-associative word is a binary tree with letters at the leaves.  Words
are compared by the length-first weight order: shorter words come first;
equally long compound words compare their right factors, then their left
factors, recursively; single letters compare by alphabet rank.  The order
is total, multiplicative (u < v implies wu < wv and uw < vw for every w),
and well founded on words of bounded length.

Words are hash-consed: structurally equal words are the same Python
object, so equality is identity and dictionary lookups never walk a tree.
Build words through :func:`leaf`, :func:`node` and :func:`bracket`, never
through the raw ``NaWord`` constructor.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Union

__all__ = [
    "Letter",
    "Alphabet",
    "NaWord",
    "MagmaPoly",
    "leaf",
    "node",
    "bracket",
    "compare_words",
    "magma_product",
    "leading_and_monic",
    "words_of_length",
]

Coeff = Union[int, Fraction]


class Letter:
    """A generator with a fixed rank in its alphabet's total order."""

    __slots__ = ("name", "rank")

    def __init__(self, name: str, rank: int):
        self.name = name
        self.rank = rank

    def __repr__(self) -> str:
        return self.name

    # Identity equality and hashing are intentional: letters are created
    # once by their alphabet, and distinct alphabets stay distinct.
    def __lt__(self, other: "Letter") -> bool:
        return self.rank < other.rank

    def __le__(self, other: "Letter") -> bool:
        return self.rank <= other.rank

    def __gt__(self, other: "Letter") -> bool:
        return self.rank > other.rank

    def __ge__(self, other: "Letter") -> bool:
        return self.rank >= other.rank


class Alphabet:
    """A finite ordered alphabet; letter ranks are contiguous from zero."""

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("alphabet must not be empty")
        if len(set(names)) != len(names):
            raise ValueError("duplicate letter names: %r" % (names,))
        self.letters = tuple(Letter(n, i) for i, n in enumerate(names))
        self._by_name = {x.name: x for x in self.letters}
        self._words: dict[int, tuple["NaWord", ...]] = {}

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, key) -> Letter:
        if isinstance(key, str):
            try:
                return self._by_name[key]
            except KeyError:
                raise KeyError("no letter named %r" % key) from None
        return self.letters[key]

    def __repr__(self) -> str:
        return "Alphabet(%s)" % " < ".join(x.name for x in self.letters)


class NaWord:
    """A non-associative word (binary tree over letters), hash-consed.

    Attributes:
        letter:  the letter at a leaf, or None for a compound word
        left, right:  the factors of a compound word, or None at a leaf
        length:  number of leaves
        key:  nested-tuple sort key realizing the weight order
        is_comb:  True when the word is left-combed, i.e. every right
            factor along the left spine is a single letter
    """

    __slots__ = ("letter", "left", "right", "length", "key", "is_comb")

    def __init__(self, letter, left, right, length, key, is_comb):
        self.letter = letter
        self.left = left
        self.right = right
        self.length = length
        self.key = key
        self.is_comb = is_comb

    @property
    def is_leaf(self) -> bool:
        return self.letter is not None

    def __repr__(self) -> str:
        if self.letter is not None:
            return self.letter.name
        return "(%r %r)" % (self.left, self.right)

    def __lt__(self, other: "NaWord") -> bool:
        return self.key < other.key

    def __le__(self, other: "NaWord") -> bool:
        return self is other or self.key < other.key

    def __gt__(self, other: "NaWord") -> bool:
        return self.key > other.key

    def __ge__(self, other: "NaWord") -> bool:
        return self is other or self.key > other.key

    def subtrees(self) -> Iterator[tuple[tuple[int, ...], "NaWord"]]:
        """Yield (path, subword) pairs in preorder: root, left, right.

        Paths are tuples over {0, 1}; 0 steps into the left factor.
        """
        stack = [((), self)]
        while stack:
            path, w = stack.pop()
            yield path, w
            if w.letter is None:
                stack.append((path + (1,), w.right))
                stack.append((path + (0,), w.left))

    def leaves(self) -> tuple[Letter, ...]:
        """The letters of the word, left to right."""
        out = []
        stack = [self]
        while stack:
            w = stack.pop()
            if w.letter is not None:
                out.append(w.letter)
            else:
                stack.append(w.right)
                stack.append(w.left)
        return tuple(out)


_LEAVES: dict[Letter, NaWord] = {}
_NODES: dict[tuple[NaWord, NaWord], NaWord] = {}


def leaf(letter: Letter) -> NaWord:
    """The one-letter word."""
    w = _LEAVES.get(letter)
    if w is None:
        w = NaWord(letter, None, None, 1, (1, letter.rank), True)
        _LEAVES[letter] = w
    return w


def node(left: NaWord, right: NaWord) -> NaWord:
    """The product word (left right)."""
    pair = (left, right)
    w = _NODES.get(pair)
    if w is None:
        n = left.length + right.length
        # Weight key: length first, then right factor, then left factor.
        w = NaWord(None, left, right, n, (n, right.key, left.key),
                   left.is_comb and right.letter is not None)
        _NODES[pair] = w
    return w


def bracket(letters: Iterable[Letter], direction: str = "left") -> NaWord:
    """Left- or right-nested bracketing of a letter sequence.

    ``bracket([x, y, z], "left")`` is ((x y) z); "right" gives (x (y z)).
    """
    letters = tuple(letters)
    if not letters:
        raise ValueError("bracket of empty letter sequence")
    if direction == "left":
        w = leaf(letters[0])
        for x in letters[1:]:
            w = node(w, leaf(x))
    elif direction == "right":
        w = leaf(letters[-1])
        for x in letters[-2::-1]:
            w = node(leaf(x), w)
    else:
        raise ValueError("direction must be 'left' or 'right'")
    return w


def compare_words(u: NaWord, v: NaWord) -> int:
    """Weight-order comparison: -1, 0 or +1.  Both words must share an alphabet."""
    if u is v:
        return 0
    return -1 if u.key < v.key else 1


def words_of_length(alphabet: Alphabet, n: int) -> tuple[NaWord, ...]:
    """All words with exactly n letters, in a fixed enumeration order."""
    if n < 1:
        raise ValueError("word length must be positive")
    cached = alphabet._words.get(n)
    if cached is None:
        if n == 1:
            cached = tuple(leaf(x) for x in alphabet)
        else:
            out = []
            for i in range(1, n):
                rights = words_of_length(alphabet, n - i)
                for lw in words_of_length(alphabet, i):
                    for rw in rights:
                        out.append(node(lw, rw))
            cached = tuple(out)
        alphabet._words[n] = cached
    return cached


_ZERO = Fraction(0)
_ONE = Fraction(1)


class MagmaPoly:
    """A finite rational combination of non-associative words.

    Immutable; zero coefficients are never stored.  The leading monomial
    (largest word in the weight order) is cached after first use.
    """

    __slots__ = ("terms", "_lead")

    def __init__(self, terms=None):
        clean: dict[NaWord, Fraction] = {}
        if terms:
            for w, c in terms.items():
                if type(c) is not Fraction:
                    c = Fraction(c)
                if c:
                    acc = clean.get(w)
                    if acc is not None:
                        c = acc + c
                        if not c:
                            del clean[w]
                            continue
                    clean[w] = c
        self.terms = clean
        self._lead = None

    @classmethod
    def _raw(cls, terms: dict) -> "MagmaPoly":
        """Trusted constructor: terms already clean (Fractions, no zeros)."""
        p = cls.__new__(cls)
        p.terms = terms
        p._lead = None
        return p

    @classmethod
    def zero(cls) -> "MagmaPoly":
        return cls._raw({})

    @classmethod
    def monomial(cls, word: NaWord, coeff: Coeff = 1) -> "MagmaPoly":
        c = Fraction(coeff)
        return cls._raw({word: c} if c else {})

    @classmethod
    def from_terms(cls, items: Iterable[tuple[NaWord, Coeff]]) -> "MagmaPoly":
        acc: dict[NaWord, Fraction] = {}
        for w, c in items:
            acc[w] = acc.get(w, _ZERO) + Fraction(c)
        return cls._raw({w: c for w, c in acc.items() if c})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MagmaPoly):
            return self.terms == other.terms
        return NotImplemented

    __hash__ = None  # mutable-dict backed; compare by value only

    def __add__(self, other: "MagmaPoly") -> "MagmaPoly":
        if not isinstance(other, MagmaPoly):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            nc = out.get(w, _ZERO) + c
            if nc:
                out[w] = nc
            else:
                out.pop(w, None)
        return MagmaPoly._raw(out)

    def __sub__(self, other: "MagmaPoly") -> "MagmaPoly":
        if not isinstance(other, MagmaPoly):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            nc = out.get(w, _ZERO) - c
            if nc:
                out[w] = nc
            else:
                out.pop(w, None)
        return MagmaPoly._raw(out)

    def __neg__(self) -> "MagmaPoly":
        return MagmaPoly._raw({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, MagmaPoly):
            return magma_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c: Coeff) -> "MagmaPoly":
        c = Fraction(c)
        if not c:
            return MagmaPoly.zero()
        return MagmaPoly._raw({w: q * c for w, q in self.terms.items()})

    def leading(self) -> NaWord:
        """The largest monomial.  Raises on the zero polynomial."""
        if self._lead is None:
            if not self.terms:
                raise ValueError("no leading monomial: zero polynomial")
            self._lead = max(self.terms, key=_word_key)
        return self._lead

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading()]

    def monic(self) -> "MagmaPoly":
        c = self.leading_coeff()
        if c == 1:
            return self
        return MagmaPoly._raw({w: q / c for w, q in self.terms.items()})

    def sorted_terms(self) -> list[tuple[NaWord, Fraction]]:
        """Terms in descending word order."""
        return sorted(self.terms.items(), key=lambda t: t[0].key, reverse=True)

    def max_length(self) -> int:
        if not self.terms:
            return 0
        return max(w.length for w in self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.sorted_terms():
            if c == 1:
                bits.append(repr(w))
            elif c == -1:
                bits.append("-%r" % (w,))
            else:
                bits.append("%s*%r" % (c, w))
        return " + ".join(bits).replace("+ -", "- ")


def _word_key(w: NaWord):
    return w.key


def magma_product(p: MagmaPoly, q: MagmaPoly) -> MagmaPoly:
    """Bilinear extension of the tree product (u, v) -> (u v)."""
    out: dict[NaWord, Fraction] = {}
    for u, a in p.terms.items():
        for v, b in q.terms.items():
            w = node(u, v)
            c = out.get(w, _ZERO) + a * b
            if c:
                out[w] = c
            else:
                out.pop(w, None)
    return MagmaPoly._raw(out)


def leading_and_monic(p: MagmaPoly) -> tuple[NaWord, MagmaPoly]:
    """The leading monomial together with the monic rescaling of p."""
    return p.leading(), p.monic()
