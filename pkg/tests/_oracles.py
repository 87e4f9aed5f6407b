"""Brute-force reference implementations the tests check the package against.

Everything here is written from the definitions in plain Python, favoring
obviousness over speed.  The two places that must agree with the package
bit for bit (equal-frequency edge placement and the smallest-first entropy
summation) follow the same pinned arithmetic contract, independently coded.
"""
import math
from bisect import bisect_right


def brute_pearson(xs, ys):
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    syy = math.fsum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        return None
    return sxy / math.sqrt(sxx * syy)


def brute_ranks(vals):
    order = sorted(range(len(vals)), key=lambda i: vals[i])
    ranks = [0.0] * len(vals)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and vals[order[j + 1]] == vals[order[i]]:
            j += 1
        mean_rank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = mean_rank
        i = j + 1
    return ranks


def brute_spearman(xs, ys):
    return brute_pearson(brute_ranks(list(xs)), brute_ranks(list(ys)))


def _as_points(rows):
    return [tuple(r) if hasattr(r, "__len__") else (float(r),) for r in rows]


def brute_distance_correlation(xs, ys):
    ax = _as_points(xs)
    ay = _as_points(ys)
    n = len(ax)

    def centered(pts):
        d = [[math.dist(pts[i], pts[j]) for j in range(n)] for i in range(n)]
        row = [math.fsum(d[i]) / n for i in range(n)]
        col = [math.fsum(d[i][j] for i in range(n)) / n for j in range(n)]
        grand = math.fsum(row) / n
        return [
            [d[i][j] - row[i] - col[j] + grand for j in range(n)] for i in range(n)
        ]

    a = centered(ax)
    b = centered(ay)
    dcov2 = math.fsum(a[i][j] * b[i][j] for i in range(n) for j in range(n)) / (n * n)
    dvx = math.fsum(a[i][j] ** 2 for i in range(n) for j in range(n)) / (n * n)
    dvy = math.fsum(b[i][j] ** 2 for i in range(n) for j in range(n)) / (n * n)
    if dvx <= 0.0 or dvy <= 0.0:
        return None
    return min(math.sqrt(max(dcov2, 0.0) / math.sqrt(dvx * dvy)), 1.0)


def sorted_entropy(counts, n):
    """Entropy in bits, probabilities summed smallest-first (the pinned order)."""
    ps = sorted(c / n for c in counts if c)
    total = 0.0
    for p in ps:
        total += p * math.log2(p)
    return -total if total != 0.0 else 0.0


def brute_entropy(symbols):
    symbols = list(symbols)
    counts = {}
    for s in symbols:
        counts[s] = counts.get(s, 0) + 1
    return sorted_entropy(counts.values(), len(symbols))


def _count(symbols):
    counts = {}
    for s in symbols:
        counts[s] = counts.get(s, 0) + 1
    return counts


def brute_mi(xs, ys):
    """I(X;Y) in bits via H(X) + H(Y) - H(X,Y) with fsum entropies."""
    n = len(xs)

    def h(counts):
        return -math.fsum((c / n) * math.log2(c / n) for c in counts.values())

    return max(h(_count(xs)) + h(_count(ys)) - h(_count(zip(xs, ys))), 0.0)


def brute_conditional_entropy(xs, ys):
    """H(X|Y) in bits: fsum over y groups of p(y) H(X|y)."""
    groups = {}
    for x, y in zip(xs, ys):
        groups.setdefault(y, []).append(x)
    n = len(xs)
    terms = []
    for y, members in groups.items():
        ny = len(members)
        counts = _count(members)
        hy = -math.fsum((c / ny) * math.log2(c / ny) for c in counts.values())
        terms.append((ny / n) * hy)
    return math.fsum(terms)


def brute_information_gain(parent, assignment):
    return brute_mi(list(parent), list(assignment))


def brute_synergy(feature_lists, ys):
    joint = list(zip(*feature_lists))
    total = brute_mi(joint, list(ys))
    for f in feature_lists:
        total -= brute_mi(list(f), list(ys))
    return total


def brute_equal_frequency(values, bins):
    vals = [float(v) for v in values]
    if bins == 1:
        return [0] * len(vals)
    s = sorted(vals)
    n = len(s)
    edges = []
    for k in range(1, bins):
        pos = (k / bins) * (n - 1)
        lo = int(pos)
        hi = min(lo + 1, n - 1)
        edges.append(s[lo] + (pos - lo) * (s[hi] - s[lo]))
    return [bisect_right(edges, v) for v in vals]


def brute_mic(xs, ys, alpha=0.6):
    """Exhaustive grid scan over the same admissible shapes, bit-exact entropies."""
    n = len(xs)
    bound = max(n**alpha, 5.0)
    best = 0.0
    for gx in range(2, n + 1):
        if gx * 2 >= bound:
            break
        xsym = brute_equal_frequency(xs, gx)
        for gy in range(2, n + 1):
            if gx * gy >= bound:
                break
            ysym = brute_equal_frequency(ys, gy)
            hx = sorted_entropy(_count(xsym).values(), n)
            hy = sorted_entropy(_count(ysym).values(), n)
            hxy = sorted_entropy(_count(zip(xsym, ysym)).values(), n)
            m = max(hx + hy - hxy, 0.0) / math.log2(min(gx, gy))
            if m > best:
                best = m
    return min(best, 1.0)


def brute_wma(vals, n):
    out = [math.nan] * len(vals)
    denom = n * (n + 1) / 2
    for i in range(n - 1, len(vals)):
        out[i] = math.fsum((j + 1) * vals[i - n + 1 + j] for j in range(n)) / denom
    return out


def brute_hma(vals, n):
    half = brute_wma(vals, n // 2)
    full = brute_wma(vals, n)
    raw = [2.0 * a - b for a, b in zip(half, full)]
    return brute_wma(raw, int(round(math.sqrt(n))))


def brute_ema(vals, n):
    alpha = 2.0 / (n + 1.0)
    out = []
    acc = None
    for v in vals:
        acc = v if acc is None else acc + alpha * (v - acc)
        out.append(acc)
    return out


def brute_returns(vals, d=1):
    out = [math.nan] * len(vals)
    for i in range(d, len(vals)):
        out[i] = vals[i] / vals[i - d] - 1.0
    return out


def brute_macd(close):
    if len(close) < 26:
        nan = [math.nan] * len(close)
        return nan, list(nan)
    fast = brute_ema(close, 12)
    slow = brute_ema(close, 26)
    line = [a - b for a, b in zip(fast, slow)]
    return line, brute_ema(line, 9)


def brute_obv(close, volume):
    out = [0.0]
    for i in range(1, len(close)):
        step = close[i] - close[i - 1]
        sign = 1 if step > 0 else (-1 if step < 0 else 0)
        out.append(out[-1] + sign * volume[i])
    return out


def brute_atr(high, low, close, n=14):
    t = len(high)
    out = [math.nan] * t
    if t < n:
        return out
    tr = [high[0] - low[0]]
    for i in range(1, t):
        tr.append(
            max(high[i] - low[i], abs(high[i] - close[i - 1]), abs(low[i] - close[i - 1]))
        )
    acc = sum(tr[:n]) / n
    out[n - 1] = acc
    for i in range(n, t):
        acc = acc + (tr[i] - acc) / n
        out[i] = acc
    return out


def brute_rsi(close, n=14):
    t = len(close)
    out = [math.nan] * t
    if t <= n:
        return out
    gains = []
    losses = []
    for i in range(1, t):
        step = close[i] - close[i - 1]
        gains.append(max(step, 0.0))
        losses.append(max(-step, 0.0))

    def value(g, l):
        if l == 0.0:
            return 50.0 if g == 0.0 else 100.0
        return 100.0 - 100.0 / (1.0 + g / l)

    avg_gain = sum(gains[:n]) / n
    avg_loss = sum(losses[:n]) / n
    out[n] = value(avg_gain, avg_loss)
    for i in range(n, t - 1):
        avg_gain = avg_gain + (gains[i] - avg_gain) / n
        avg_loss = avg_loss + (losses[i] - avg_loss) / n
        out[i + 1] = value(avg_gain, avg_loss)
    return out


def brute_window_anchors(length, window, step, horizon):
    anchors = []
    a = window - 1
    while a + horizon < length:
        anchors.append(a)
        a += step
    return anchors
