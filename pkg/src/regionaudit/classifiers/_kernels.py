"""Hot training/scoring loops, each in a numba and a NumPy variant.

Naming convention: ``<name>_numba`` is the jitted build, ``<name>_numpy``
the plain one, and the bare ``<name>`` is whichever _accel selected as
the default. The sequential solvers (pairwise dual optimizer, tree
builder, perceptron, minibatch trainer) share one source compiled both
ways; their array arithmetic is NumPy either way, so results agree
across paths (bit-exact for the integer-scored tree builder, to float
rounding for the rest). The forest vote walk has genuinely different
shapes: a scalar per-sample descent under numba versus a vectorized
frontier walk in NumPy.

No function here draws randomness; bootstrap rows, feature subsets,
batch indices and weight inits are pre-generated by callers with seeded
numpy Generators, which also keeps the two paths aligned.
"""

from __future__ import annotations

import numpy as np

from .._accel import HAS_NUMBA, NUMBA_ENABLED, njit


def _jit(fn):
    return njit(cache=True)(fn) if HAS_NUMBA else fn


# ---------------------------------------------------------------------------
# Pairwise dual optimizer for SVMs (precomputed kernel matrix).

def _smo_core(K, y, C, tol, max_epochs):
    """Optimize the SVM dual by deterministic pairwise updates.

    K: (m, m) kernel matrix, y: (m,) float64 in {-1, +1}. Returns
    (alpha, b, epochs). Decision value of row i is
    sum_j alpha_j y_j K_ij + b; E caches decision - y. Candidate
    partners are tried worst-violator-first, then in ascending index
    order (no random restarts, so runs are reproducible).
    """
    m = K.shape[0]
    alpha = np.zeros(m)
    E = -y.copy()
    b = 0.0
    eps = 1e-8
    snap = 1e-10 * C
    examine_all = True
    epochs = 0
    while epochs < max_epochs:
        changed = 0
        for i2 in range(m):
            a2old = alpha[i2]
            if not examine_all and (a2old <= 0.0 or a2old >= C):
                continue
            y2 = y[i2]
            E2 = E[i2]
            r2 = E2 * y2
            if not ((r2 < -tol and a2old < C) or (r2 > tol and a2old > 0.0)):
                continue
            # Partner order: largest |E1-E2| among non-bound rows, then
            # non-bound ascending, then everything ascending.
            cand = np.empty(2 * m + 1, np.int64)
            nc = 0
            best = -1
            best_gap = -1.0
            for j in range(m):
                if 0.0 < alpha[j] < C:
                    gap = abs(E[j] - E2)
                    if gap > best_gap:
                        best_gap = gap
                        best = j
            if best >= 0:
                cand[nc] = best
                nc += 1
            for j in range(m):
                if 0.0 < alpha[j] < C:
                    cand[nc] = j
                    nc += 1
            for j in range(m):
                cand[nc] = j
                nc += 1
            for ci in range(nc):
                i1 = cand[ci]
                if i1 == i2:
                    continue
                a1old = alpha[i1]
                a2old = alpha[i2]
                y1 = y[i1]
                E1 = E[i1]
                E2 = E[i2]
                s = y1 * y2
                if s > 0.0:
                    L = max(0.0, a1old + a2old - C)
                    H = min(C, a1old + a2old)
                else:
                    L = max(0.0, a2old - a1old)
                    H = min(C, C + a2old - a1old)
                if L >= H:
                    continue
                k11 = K[i1, i1]
                k12 = K[i1, i2]
                k22 = K[i2, i2]
                eta = k11 + k22 - 2.0 * k12
                if eta > 0.0:
                    a2 = a2old + y2 * (E1 - E2) / eta
                    if a2 < L:
                        a2 = L
                    elif a2 > H:
                        a2 = H
                else:
                    # Flat direction: evaluate the dual at both ends.
                    v1 = E1 + y1 - b - y1 * a1old * k11 - y2 * a2old * k12
                    v2 = E2 + y2 - b - y1 * a1old * k12 - y2 * a2old * k22
                    a1L = a1old + s * (a2old - L)
                    a1H = a1old + s * (a2old - H)
                    objL = (
                        0.5 * k11 * a1L * a1L
                        + 0.5 * k22 * L * L
                        + s * k12 * a1L * L
                        + y1 * a1L * v1
                        + y2 * L * v2
                        - a1L
                        - L
                    )
                    objH = (
                        0.5 * k11 * a1H * a1H
                        + 0.5 * k22 * H * H
                        + s * k12 * a1H * H
                        + y1 * a1H * v1
                        + y2 * H * v2
                        - a1H
                        - H
                    )
                    if objL < objH - eps:
                        a2 = L
                    elif objL > objH + eps:
                        a2 = H
                    else:
                        a2 = a2old
                if abs(a2 - a2old) < eps * (a2 + a2old + eps):
                    continue
                a1 = a1old + s * (a2old - a2)
                if a1 < snap:
                    a1 = 0.0
                elif a1 > C - snap:
                    a1 = C
                if a2 < snap:
                    a2 = 0.0
                elif a2 > C - snap:
                    a2 = C
                da1 = a1 - a1old
                da2 = a2 - a2old
                b1 = b - E1 - y1 * da1 * k11 - y2 * da2 * k12
                b2 = b - E2 - y1 * da1 * k12 - y2 * da2 * k22
                if 0.0 < a1 < C:
                    bnew = b1
                elif 0.0 < a2 < C:
                    bnew = b2
                else:
                    bnew = 0.5 * (b1 + b2)
                alpha[i1] = a1
                alpha[i2] = a2
                E += y1 * da1 * K[i1] + y2 * da2 * K[i2] + (bnew - b)
                b = bnew
                changed += 1
                break
        epochs += 1
        if examine_all:
            examine_all = False
            if changed == 0:
                break
        elif changed == 0:
            examine_all = True
    return alpha, b, epochs


smo_solve_numpy = _smo_core
smo_solve_numba = _jit(_smo_core)
smo_solve = smo_solve_numba if NUMBA_ENABLED else smo_solve_numpy


# ---------------------------------------------------------------------------
# Gini decision tree builder (integer split scores, exact tie-breaking).

def _tree_core(
    X,
    y01,
    idx,
    feat_sub,
    max_depth,
    node_feature,
    node_thresh,
    node_left,
    node_right,
    node_vote,
):
    """Grow one tree over the rows listed in ``idx`` (permuted in place).

    feat_sub[nid] lists the candidate features for the node with id
    ``nid`` (pre-drawn, ascending). Split quality is compared through
    integer cross-multiplication, so any two builds of the same inputs
    pick identical splits; ties fall to the lowest feature index, then
    the lowest threshold. Leaves get feature -1 and a 0/1 majority vote
    (ties vote 0). Returns the number of nodes written.
    """
    m = idx.shape[0]
    cap = node_feature.shape[0]
    stack_node = np.empty(cap, np.int64)
    stack_lo = np.empty(cap, np.int64)
    stack_hi = np.empty(cap, np.int64)
    stack_depth = np.empty(cap, np.int64)
    buf = np.empty(m, np.int64)
    top = 0
    stack_node[top] = 0
    stack_lo[top] = 0
    stack_hi[top] = m
    stack_depth[top] = 0
    top += 1
    node_count = 1
    k = feat_sub.shape[1]
    while top > 0:
        top -= 1
        nid = stack_node[top]
        lo = stack_lo[top]
        hi = stack_hi[top]
        depth = stack_depth[top]
        size = hi - lo
        pos = 0
        for t in range(lo, hi):
            pos += y01[idx[t]]
        neg = size - pos
        splittable = pos > 0 and neg > 0 and size >= 2
        if splittable and max_depth > 0 and depth >= max_depth:
            splittable = False
        best_f = -1
        best_thresh = 0.0
        best_num = np.int64(-1)
        best_den = np.int64(1)
        if splittable:
            vals = np.empty(size)
            for c in range(k):
                f = feat_sub[nid, c]
                for t in range(size):
                    vals[t] = X[idx[lo + t], f]
                order = np.argsort(vals)
                pl = np.int64(0)
                for p in range(1, size):
                    pl += y01[idx[lo + order[p - 1]]]
                    v0 = vals[order[p - 1]]
                    v1 = vals[order[p]]
                    if v1 <= v0:
                        continue
                    nl = np.int64(p) - pl
                    pr = pos - pl
                    nr = neg - nl
                    left = pl * pl + nl * nl
                    right = pr * pr + nr * nr
                    num = left * np.int64(size - p) + right * np.int64(p)
                    den = np.int64(p) * np.int64(size - p)
                    if best_f < 0 or num * best_den > best_num * den:
                        best_f = f
                        best_thresh = 0.5 * (v0 + v1)
                        best_num = num
                        best_den = den
        did_split = False
        if best_f >= 0:
            cl = lo
            cr = 0
            for t in range(lo, hi):
                r = idx[t]
                if X[r, best_f] <= best_thresh:
                    idx[cl] = r
                    cl += 1
                else:
                    buf[cr] = r
                    cr += 1
            # Midpoints of adjacent floats can round onto a sample value
            # and drain one side; fall back to a leaf when that happens.
            if cl > lo and cr > 0:
                for t in range(cr):
                    idx[cl + t] = buf[t]
                left_id = node_count
                right_id = node_count + 1
                node_count += 2
                node_feature[nid] = best_f
                node_thresh[nid] = best_thresh
                node_left[nid] = left_id
                node_right[nid] = right_id
                node_vote[nid] = 0
                stack_node[top] = right_id
                stack_lo[top] = cl
                stack_hi[top] = hi
                stack_depth[top] = depth + 1
                top += 1
                stack_node[top] = left_id
                stack_lo[top] = lo
                stack_hi[top] = cl
                stack_depth[top] = depth + 1
                top += 1
                did_split = True
        if not did_split:
            node_feature[nid] = -1
            node_thresh[nid] = 0.0
            node_left[nid] = -1
            node_right[nid] = -1
            node_vote[nid] = 1 if 2 * pos > size else 0
    return node_count


build_tree_numpy = _tree_core
build_tree_numba = _jit(_tree_core)
build_tree = build_tree_numba if NUMBA_ENABLED else build_tree_numpy


def _votes_scalar(X, features, thresholds, lefts, rights, votes, roots):
    """Per-sample descent through every packed tree; returns +1 vote counts."""
    m = X.shape[0]
    out = np.zeros(m, np.int64)
    for t in range(roots.shape[0]):
        root = roots[t]
        for i in range(m):
            node = root
            while features[node] >= 0:
                if X[i, features[node]] <= thresholds[node]:
                    node = lefts[node]
                else:
                    node = rights[node]
            out[i] += votes[node]
    return out


forest_votes_numba = _jit(_votes_scalar)


def forest_votes_numpy(X, features, thresholds, lefts, rights, votes, roots):
    """Vectorized walk: advance the whole sample frontier one level at a time."""
    m = X.shape[0]
    out = np.zeros(m, np.int64)
    rows = np.arange(m)
    for root in roots:
        node = np.full(m, root, dtype=np.int64)
        live = features[node] >= 0
        while live.any():
            at = node[live]
            f = features[at]
            go_left = X[rows[live], f] <= thresholds[at]
            node[live] = np.where(go_left, lefts[at], rights[at])
            live = features[node] >= 0
        out += votes[node]
    return out


forest_votes = forest_votes_numba if NUMBA_ENABLED else forest_votes_numpy


# ---------------------------------------------------------------------------
# Minibatch trainer for the fully connected network (two hidden layers,
# rectifier hiddens, logistic output, adaptive-accumulator updates).

def _mlp_core(X, y, W1, b1, W2, b2, W3, b3, batches, lr, acc0):
    """Train in place; returns (finite_flag, last_loss).

    X: (m, n); y: (m, 1) float64 of 0/1; batches: (steps, batch) row
    indices, pre-drawn. Accumulators start at acc0 and updates follow
    param -= lr * g / sqrt(acc), the classic adaptive scheme.
    """
    aW1 = np.full(W1.shape, acc0)
    ab1 = np.full(b1.shape, acc0)
    aW2 = np.full(W2.shape, acc0)
    ab2 = np.full(b2.shape, acc0)
    aW3 = np.full(W3.shape, acc0)
    ab3 = np.full(b3.shape, acc0)
    steps = batches.shape[0]
    loss = 0.0
    for s in range(steps):
        rows = batches[s]
        Xb = X[rows]
        yb = y[rows]
        inv = 1.0 / rows.shape[0]
        Z1 = np.dot(Xb, W1) + b1
        A1 = np.maximum(Z1, 0.0)
        Z2 = np.dot(A1, W2) + b2
        A2 = np.maximum(Z2, 0.0)
        Z3 = np.dot(A2, W3) + b3
        P = 1.0 / (1.0 + np.exp(-np.minimum(np.maximum(Z3, -40.0), 40.0)))
        G3 = (P - yb) * inv
        gW3 = np.dot(np.ascontiguousarray(A2.T), G3)
        gb3 = np.sum(G3, axis=0)
        GA2 = np.dot(G3, np.ascontiguousarray(W3.T))
        G2 = np.where(Z2 > 0.0, GA2, 0.0)
        gW2 = np.dot(np.ascontiguousarray(A1.T), G2)
        gb2 = np.sum(G2, axis=0)
        GA1 = np.dot(G2, np.ascontiguousarray(W2.T))
        G1 = np.where(Z1 > 0.0, GA1, 0.0)
        gW1 = np.dot(np.ascontiguousarray(Xb.T), G1)
        gb1 = np.sum(G1, axis=0)
        aW3 += gW3 * gW3
        W3 -= lr * gW3 / np.sqrt(aW3)
        ab3 += gb3 * gb3
        b3 -= lr * gb3 / np.sqrt(ab3)
        aW2 += gW2 * gW2
        W2 -= lr * gW2 / np.sqrt(aW2)
        ab2 += gb2 * gb2
        b2 -= lr * gb2 / np.sqrt(ab2)
        aW1 += gW1 * gW1
        W1 -= lr * gW1 / np.sqrt(aW1)
        ab1 += gb1 * gb1
        b1 -= lr * gb1 / np.sqrt(ab1)
        if s % 250 == 0 or s == steps - 1:
            Pc = np.minimum(np.maximum(P, 1e-12), 1.0 - 1e-12)
            loss = -np.mean(yb * np.log(Pc) + (1.0 - yb) * np.log(1.0 - Pc))
            if not np.isfinite(loss):
                return False, loss
    return True, loss


mlp_train_numpy = _mlp_core
mlp_train_numba = _jit(_mlp_core)
mlp_train = mlp_train_numba if NUMBA_ENABLED else mlp_train_numpy


# ---------------------------------------------------------------------------
# Mistake-driven linear separator.

def _perceptron_core(X, y, w, b, max_epochs):
    """Classic update rule, fixed sample order. Mutates w; returns
    (b, total_updates, epochs_run, converged)."""
    m = X.shape[0]
    updates = 0
    epochs = 0
    converged = False
    for _ in range(max_epochs):
        mistakes = 0
        for i in range(m):
            if y[i] * (np.dot(X[i], w) + b) <= 0.0:
                w += y[i] * X[i]
                b += y[i]
                mistakes += 1
        epochs += 1
        updates += mistakes
        if mistakes == 0:
            converged = True
            break
    return b, updates, epochs, converged


perceptron_train_numpy = _perceptron_core
perceptron_train_numba = _jit(_perceptron_core)
perceptron_train = perceptron_train_numba if NUMBA_ENABLED else perceptron_train_numpy
