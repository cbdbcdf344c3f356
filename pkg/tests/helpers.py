"""Randomized generators shared by the test modules.

All generators take an explicit random.Random so tests stay reproducible.
Consistent instances are built from a hidden random solution plus
non-negative slack, so consistency is guaranteed by construction.
"""

import random
from fractions import Fraction

from cstnu import (Constraint, ContingentLink, Cstp, CstpEdge, Label,
                   LabeledConstraint, Network, Scenario, Stn, Strategy,
                   TimePoint, conjoin, enumerate_scenarios, relevant_timepoints)
from cstnu.labels import EMPTY, INCONSISTENT


def frac(rng, lo=0, hi=20):
    return Fraction(rng.randint(lo, hi))


def random_consistent_stn(rng, max_points=8):
    """A consistent STN built around a random hidden solution."""
    n = rng.randint(2, max_points)
    ids = ["N%d" % i for i in range(n)]
    solution = {i: frac(rng) for i in ids}
    constraints = set()
    for _ in range(rng.randint(n, 2 * n)):
        a, b = rng.sample(ids, 2)
        slack = frac(rng, 0, 5)
        constraints.add(Constraint(a, b, solution[b] - solution[a] + slack))
    return Stn(frozenset(ids), frozenset(constraints)), solution


def random_stn(rng, max_points=6):
    """An arbitrary STN; may or may not be consistent."""
    n = rng.randint(2, max_points)
    ids = ["N%d" % i for i in range(n)]
    constraints = set()
    for _ in range(rng.randint(1, 2 * n)):
        a, b = rng.sample(ids, 2)
        constraints.add(Constraint(a, b, Fraction(rng.randint(-10, 10))))
    return Stn(frozenset(ids), frozenset(constraints))


def random_label(rng, letters):
    return Label((l, rng.random() < 0.5) for l in letters
                 if rng.random() < 0.5)


def random_cstn(rng, max_letters=2, max_points=5, consistent=False):
    """A well-defined conditional network without contingent links.

    Observation points are unlabeled; regular points carry random labels
    with the observation-before-use edges added, and constraint labels
    conjoin their end-point labels, so the well-definedness validator
    passes by construction.
    """
    letters = sorted(rng.sample("pqr", rng.randint(1, max_letters)))
    observations = {l: "O%s" % l for l in letters}
    points = {obs: EMPTY for obs in observations.values()}
    n = rng.randint(1, max_points - len(points))
    for i in range(n):
        points["X%d" % i] = random_label(rng, letters)

    solution = {p: frac(rng) for p in points}
    constraints = set()
    epsilon = Fraction(1, 1000)
    for point, label in points.items():
        for letter in sorted(label.letters):
            obs = observations[letter]
            delta = -epsilon
            if consistent and solution[obs] - solution[point] > delta:
                solution[point] = solution[obs] + Fraction(1)
            constraints.add(LabeledConstraint(point, obs, delta, label))
    for _ in range(rng.randint(1, 2 * len(points))):
        a, b = rng.sample(sorted(points), 2)
        label = conjoin(points[a], points[b])
        if label is INCONSISTENT:
            continue
        if consistent:
            delta = solution[b] - solution[a] + frac(rng, 0, 5)
        else:
            delta = Fraction(rng.randint(-10, 15))
        constraints.add(LabeledConstraint(a, b, delta, label))
    return Network(
        timepoints=[TimePoint(p, l) for p, l in points.items()],
        constraints=constraints, letters=letters, observations=observations,
        epsilon=epsilon)


def random_cstp(rng, max_letters=2, max_points=4):
    """A conditional problem with interval edges satisfying the
    compilation preconditions."""
    letters = sorted(rng.sample("pq", rng.randint(1, max_letters)))
    observations = {l: "O%s" % l for l in letters}
    labels = {obs: EMPTY for obs in observations.values()}
    for i in range(rng.randint(1, max_points)):
        labels["X%d" % i] = random_label(rng, letters)
    edges = []
    for point, label in labels.items():
        for letter in sorted(label.letters):
            edges.append(CstpEdge(observations[letter], point,
                                  Fraction(1), Fraction(10)))
    for _ in range(rng.randint(0, 3)):
        a, b = rng.sample(sorted(labels), 2)
        if conjoin(labels[a], labels[b]) is INCONSISTENT:
            continue
        lo = frac(rng, 0, 5)
        edges.append(CstpEdge(a, b, lo, lo + frac(rng, 1, 10)))
    return Cstp(timepoints=tuple(sorted(labels.items())),
                letters=frozenset(letters), observations=observations,
                edges=tuple(edges))


def random_stnu(rng, max_links=2, extra_points=2, consistent=False):
    """An STNU with the required link-range constraints in place."""
    links = []
    constraints = set()
    points = []
    for i in range(rng.randint(1, max_links)):
        a, c = "A%d" % i, "C%d" % i
        lo = frac(rng, 1, 5)
        hi = lo + frac(rng, 1, 5)
        links.append(ContingentLink(a, lo, hi, c))
        constraints.add(LabeledConstraint(a, c, hi))
        constraints.add(LabeledConstraint(c, a, -lo))
        points.extend([a, c])
    for i in range(rng.randint(0, extra_points)):
        points.append("X%d" % i)
    for _ in range(rng.randint(0, 3)):
        a, b = rng.sample(points, 2)
        lo = 0 if consistent else -10
        constraints.add(LabeledConstraint(a, b, Fraction(rng.randint(lo, 15))))
    return Network(timepoints=points, constraints=constraints, links=links)


def random_cstn_strategy(rng, network, grid=6):
    """An arbitrary scenario-indexed strategy over small integer times.

    Half the time every scenario shares one schedule (trivially dynamic),
    otherwise times are drawn independently per scenario, so both
    dynamic and non-dynamic strategies appear.
    """
    scenarios = enumerate_scenarios(network.letters)
    constant = rng.random() < 0.5
    shared = {p: frac(rng, 0, grid) for p in network.timepoints}
    table = {}
    for s in scenarios:
        relevant = relevant_timepoints(network, s)
        if constant:
            schedule = {p: shared[p] for p in sorted(relevant)}
        else:
            schedule = {p: frac(rng, 0, grid) for p in sorted(relevant)}
        table[s] = schedule
    return Strategy("cstn", table)
