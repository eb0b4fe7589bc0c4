"""Independent reference implementations used only by the tests."""

from fractions import Fraction


def rps_exact(quintile, probs):
    """RPS of a realised quintile (1..5) against probabilities, in exact arithmetic."""
    probs = [Fraction(p) for p in probs]
    total = Fraction(0)
    cum_f = Fraction(0)
    for j in range(1, 6):
        cum_f += probs[j - 1]
        cum_q = 1 if quintile <= j else 0
        total += (cum_q - cum_f) ** 2
    return total / 5


def brute_rtt(prices, classes, day, long_h, short_h, long_cut, short_cut):
    """Literal regression-to-the-trend selection, one asset at a time.

    prices: list of per-day lists; classes: list of "Stock"/"ETF".
    Returns the list of selected asset positions.
    """
    n = len(classes)

    def ranks(h):
        ratio = [prices[day - 1][i] / prices[day - 1 - h][i] for i in range(n)]
        order = sorted(range(n), key=lambda i: (ratio[i], i))
        out = [0] * n
        for r, i in enumerate(order, start=1):
            out[i] = r
        return out

    lr, sr = ranks(long_h), ranks(short_h)
    return [
        i for i in range(n)
        if classes[i] == "Stock" and lr[i] > long_cut and sr[i] <= short_cut
    ]
