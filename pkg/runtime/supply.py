import abc


# Identifier supplies: splittable infinite sets of choice identifiers
class IDSupply(abc.ABC):
    @classmethod
    @abc.abstractmethod
    def init_supply(cls):
        raise NotImplementedError()

    @abc.abstractmethod
    def this_id(self):
        raise NotImplementedError()

    @abc.abstractmethod
    def left_supply(self):
        raise NotImplementedError()

    @abc.abstractmethod
    def right_supply(self):
        raise NotImplementedError()


class IntegerSupply(IDSupply):
    """
    Supply n denotes the identifier set {n} u ids(2n) u ids(2n+1).
    Identifiers of a supply are exactly the binary numbers having n as prefix,
    which is what ancestors/rebase rely on.
    """
    __slots__ = ("n",)

    def __init__(self, n):
        assert n >= 1, f"Invalid supply: {n}"
        self.n = n

    @classmethod
    def init_supply(cls):
        return cls(1)

    def this_id(self):
        return self.n

    def left_supply(self):
        return IntegerSupply(2*self.n)

    def right_supply(self):
        return IntegerSupply(2*self.n + 1)

    def __eq__(self, other):
        return isinstance(other, IntegerSupply) and other.n == self.n

    def __hash__(self):
        return hash(("supply", self.n))

    def __repr__(self):
        return f"IntegerSupply({self.n})"

    # Raw-identifier geometry (identifiers below a supply form a subtree)
    @staticmethod
    def ancestors(raw):
        # raw itself first, then parents up to the root
        while raw >= 1:
            yield raw
            raw >>= 1

    @staticmethod
    def is_below(raw, root):
        shift = raw.bit_length() - root.bit_length()
        return shift >= 0 and (raw >> shift) == root

    @staticmethod
    def rebase(raw, src, dst):
        # Address of raw inside src's subtree, re-rooted at dst
        shift = raw.bit_length() - src.bit_length()
        return (dst << shift) | (raw & ((1 << shift) - 1))


def init_supply(model=IntegerSupply):
    return model.init_supply()

def this_id(s):
    return s.this_id()

def left_supply(s):
    return s.left_supply()

def right_supply(s):
    return s.right_supply()

def right_n(s, n):
    for _ in range(n):
        s = s.right_supply()
    return s

def split_args(s, n):
    # Application layout: n argument supplies and the supply of the call itself
    return [right_n(s, k).left_supply() for k in range(n)], right_n(s, n)

def spread(s, n):
    # Supplies for n positions: k < n gets left(right^k(s)), the last right^(n-1)(s)
    if n == 0:
        return []
    supplies, last = split_args(s, n-1)
    return supplies + [last]
