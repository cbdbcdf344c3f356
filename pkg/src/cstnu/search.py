"""Desk-scale dynamic-controllability checking.

The situation space is discretized (a duration grid per contingent link)
and strategies are searched as observation-ordered decision trees: the
same times are committed for every drama of an information set until
their histories diverge, so the dynamic* property holds by construction.
Viability is checked per leaf.  Verdicts are sound, not complete:

* an inconsistent sampled projection refutes controllability outright;
* a synthesized strategy is independently re-certified before the
  "controllable" verdict is returned;
* exhausting the decision-tree space over the candidate time grid yields
  "not-controllable at the configured granularity" on small instances,
  and "unknown" when the search bounds are hit first.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .model import Constraint, Stn, validate
from .projection import (Drama, Scenario, drama_projection, enumerate_scenarios,
                         relevant_timepoints, sample_situations)
from .semantics import Strategy, is_dynamic_star, is_viable
from .stn import check_solution, solve


@dataclass
class _DramaCtx:
    """Per-drama precomputation shared by every search."""

    idx: int
    drama: Drama
    relevant: frozenset
    durations: dict          # contingent point -> sampled duration
    projection: object
    matrix: object


class _Problem:
    """A network plus its sampled drama set, ready for tree search."""

    def __init__(self, network, dramas):
        self.network = network
        self.contingent = network.contingent_points
        self.noncontingent = sorted(set(network.timepoints) - self.contingent)
        self.obs_letter = {point: letter for letter, point in network.observations.items()}
        self.activation = {link.contingent: link.activation for link in network.links}
        self.dctxs = []
        for i, drama in enumerate(dramas):
            relevant = relevant_timepoints(network, drama.scenario)
            projection = drama_projection(network, drama.scenario, drama.situation)
            durations = {link.contingent: d
                         for link, d in zip(network.links, drama.situation)
                         if link.activation in relevant and link.contingent in relevant}
            self.dctxs.append(_DramaCtx(i, drama, relevant, durations,
                                        projection, solve(_with_origin(projection))))

    def inconsistent_drama(self):
        for d in self.dctxs:
            if not d.matrix.consistent:
                return d
        return None

    def known_times(self, dctx, committed):
        """Committed times plus the contingent times they determine."""
        times = {p: t for p, t in committed.items() if p in dctx.relevant}
        changed = True
        while changed:
            changed = False
            for point, dur in dctx.durations.items():
                if point in times:
                    continue
                act = self.activation[point]
                if act in times:
                    times[point] = times[act] + dur
                    changed = True
        return times

    def events(self, dctx, committed):
        """Observable history events with already-determined times."""
        times = self.known_times(dctx, committed)
        out = []
        for point, letter in self.obs_letter.items():
            if point in dctx.relevant and point in times:
                out.append((times[point], ("obs", letter),
                            dctx.drama.scenario.value(letter)))
        for point, dur in dctx.durations.items():
            if point in times:
                out.append((times[point], ("link", self.activation[point], point), dur))
        return out

    def next_divergence(self, dctxs, committed, now):
        """Earliest time >= now at which the histories of `dctxs` split.

        Returns (time, groups) where groups partitions dctxs by the
        content of their events at that time, or None.
        """
        per_time = []
        times = set()
        for d in dctxs:
            table = {}
            for t, key, content in self.events(d, committed):
                if t >= now:
                    table.setdefault(t, set()).add((key, content))
                    times.add(t)
            per_time.append(table)
        for t in sorted(times):
            contents = [frozenset(table.get(t, ())) for table in per_time]
            if any(c != contents[0] for c in contents):
                groups = {}
                for d, c in zip(dctxs, contents):
                    groups.setdefault(c, []).append(d)
                return t, [groups[k] for k in sorted(groups, key=sorted)]
        return None

    def ready_points(self, dctxs, committed):
        """Uncommitted non-contingent points, split into uniformly-relevant
        (executable) and relevance-blocked ones."""
        ready, blocked = [], []
        for point in self.noncontingent:
            if point in committed:
                continue
            flags = [point in d.relevant for d in dctxs]
            if not any(flags):
                continue
            (ready if all(flags) else blocked).append(point)
        return ready, blocked

    def window(self, dctxs, committed, point):
        """Shared feasible interval for `point` across `dctxs`.

        Uses STN decomposability: any value within the distance-matrix
        window of the committed anchors extends to a full solution of
        each drama's projection.
        """
        lb, ub = Fraction(0), None
        for d in dctxs:
            floor = d.matrix.distance(point, _ORIGIN)
            if floor != _INF and -floor > lb:
                lb = -floor
            for anchor, t in committed.items():
                if anchor not in d.relevant:
                    continue
                fwd = d.matrix.distance(anchor, point)
                back = d.matrix.distance(point, anchor)
                if back != _INF and t - back > lb:
                    lb = t - back
                if fwd != _INF:
                    cap = t + fwd
                    if ub is None or cap < ub:
                        ub = cap
        return lb, ub

    def schedule_of(self, dctx, committed):
        return self.known_times(dctx, committed)


_INF = float("inf")

# Virtual origin pinned at time 0.  Every point is floored at it, so the
# distance matrix yields absolute earliest times even before any real
# point has been committed.
_ORIGIN = "__origin__"


def _with_origin(projection):
    constraints = set(projection.constraints)
    for point in projection.timepoints:
        constraints.add(Constraint(point, _ORIGIN, 0))
    return Stn(frozenset(projection.timepoints) | {_ORIGIN},
               frozenset(constraints))


def _synthesize(problem):
    """Greedy earliest-first decision-tree synthesis.

    Returns {Drama: schedule} or None.  Within an information set the
    globally earliest feasible point is committed; when every feasible
    commitment would fall past the next history divergence, the search
    waits, splits the information set, and recurses per branch.
    """
    epsilon = problem.network.epsilon
    table = {}

    def step(dctxs, committed, now, strict):
        while True:
            ready, blocked = problem.ready_points(dctxs, committed)
            div = problem.next_divergence(dctxs, committed, now)
            floor = now + epsilon if strict else now

            best = None
            for point in ready:
                lb, ub = problem.window(dctxs, committed, point)
                t = max(lb, floor)
                if ub is not None and t > ub:
                    if strict and lb <= now and ub > now:
                        t = now + (ub - now) / 2   # epsilon tick overshot the window
                        if t < lb:
                            continue
                    else:
                        continue
                if div is not None and t > div[0]:
                    continue
                if best is None or (t, point) < best:
                    best = (t, point)

            if best is not None:
                t, point = best
                committed = dict(committed)
                committed[point] = t
                now, strict = t, False
                continue

            if not ready and not blocked:
                for d in dctxs:
                    schedule = problem.schedule_of(d, committed)
                    if check_solution(d.projection, _restrict(schedule, d.relevant)):
                        return False
                    table[d.drama] = _restrict(schedule, d.relevant)
                return True

            if div is None:
                return False
            t, groups = div
            for group in groups:
                if not step(group, dict(committed), t, True):
                    return False
            return True

    if step(problem.dctxs, {}, Fraction(0), False):
        return table
    return None


def _restrict(schedule, points):
    return {p: t for p, t in schedule.items() if p in points}


def candidate_time_grid(network, situations, depth=3, cap=24):
    """Candidate execution times: sums and differences of the network's
    constants, closed to `depth`, truncated to the `cap` smallest."""
    base = {Fraction(0), network.epsilon}
    horizon = Fraction(1)
    for c in network.constraints:
        base.add(abs(Fraction(c.delta)))
        horizon += abs(Fraction(c.delta))
    for link in network.links:
        base.add(Fraction(link.lower))
        base.add(Fraction(link.upper))
        horizon += Fraction(link.upper)
    for situation in situations:
        base.update(Fraction(d) for d in situation)
    base = {v for v in base if 0 <= v <= horizon}
    grid = set(base)
    for _ in range(depth - 1):
        new = set()
        for a in grid:
            for b in base:
                for v in (a + b, a - b):
                    if 0 <= v <= horizon:
                        new.add(v)
        grid |= new
        if len(grid) > 4 * cap:
            break
    return tuple(sorted(grid)[:cap])


class _Budget(Exception):
    pass


def _exhaustive_witness(problem, grid, budget):
    """Complete search of grid-valued decision-tree strategies.

    Returns (table, exhausted): `table` is a viable dynamic strategy or
    None; `exhausted` is True when the space was fully explored within
    budget.  Only viable prefixes are expanded, so success needs no
    further viability check (it is still re-certified by the caller).
    """
    counter = [0]
    failed = set()

    def active_constraints(dctx):
        return dctx.projection.constraints

    by_point = {}
    for d in problem.dctxs:
        index = {}
        for c in active_constraints(d):
            index.setdefault(c.source, []).append(c)
            index.setdefault(c.target, []).append(c)
        by_point[d.idx] = index

    def violates(dctx, committed, fresh):
        times = problem.known_times(dctx, committed)
        new = {p for p in fresh if p in times}
        for point in sorted(times):
            if point not in new:
                continue
            for c in by_point[dctx.idx].get(point, ()):
                if c.source in times and c.target in times:
                    if times[c.target] - times[c.source] > c.delta:
                        return True
        return False

    def newly_known(dctx, committed, point):
        before = set(problem.known_times(dctx, {p: t for p, t in committed.items()
                                                if p != point}))
        return set(problem.known_times(dctx, committed)) - before

    def key_of(dctxs, committed, now, strict):
        return (frozenset(d.idx for d in dctxs),
                tuple(sorted(committed.items())), now, strict)

    def step(dctxs, committed, now, strict):
        counter[0] += 1
        if counter[0] > budget:
            raise _Budget()
        key = key_of(dctxs, committed, now, strict)
        if key in failed:
            return None

        ready, blocked = problem.ready_points(dctxs, committed)
        div = problem.next_divergence(dctxs, committed, now)

        if not ready and not blocked:
            table = {}
            for d in dctxs:
                table[d.drama] = _restrict(problem.schedule_of(d, committed), d.relevant)
            return table

        for point in ready:
            for t in grid:
                if t < now or (strict and t == now):
                    continue
                if div is not None and t > div[0]:
                    break
                trial = dict(committed)
                trial[point] = t
                if any(violates(d, trial, newly_known(d, trial, point)) for d in dctxs):
                    continue
                result = step(dctxs, trial, t, False)
                if result is not None:
                    return result

        if div is not None:
            t, groups = div
            merged = {}
            for group in groups:
                result = step(group, dict(committed), t, True)
                if result is None:
                    merged = None
                    break
                merged.update(result)
            if merged is not None:
                return merged

        failed.add(key)
        return None

    try:
        table = step(problem.dctxs, {}, Fraction(0), False)
        return table, True
    except _Budget:
        return None, False


def tree_strategy_masks(network, constraint_sets, grid, budget=2_000_000):
    """Achievable violation masks over all grid-valued decision-tree
    strategies of `network`'s drama set.

    Bit i of a mask is set when the strategy violates some constraint of
    `constraint_sets[i]` in some drama whose scenario makes its label
    true.  The full mask set supports questions like "is every strategy
    viable for set 0 also viable for set 1".
    """
    scenarios = enumerate_scenarios(network.letters)
    situations = sample_situations(network.links) if network.links else [()]
    dramas = [Drama(s, w) for s in scenarios for w in situations]
    problem = _Problem(network, dramas)
    counter = [0]
    memo = {}

    active = {}
    for d in problem.dctxs:
        values = d.drama.scenario.as_mapping()
        for i, constraints in enumerate(constraint_sets):
            index = {}
            for c in constraints:
                if all(values.get(l) == s for l, s in c.label.literals):
                    index.setdefault(c.source, []).append(c)
                    index.setdefault(c.target, []).append(c)
            active[(i, d.idx)] = index

    def commit_mask(dctxs, committed, point):
        mask = 0
        for d in dctxs:
            times = problem.known_times(dctx=d, committed=committed)
            prior = set(problem.known_times(d, {p: t for p, t in committed.items()
                                                if p != point}))
            fresh = set(times) - prior
            for i in range(len(constraint_sets)):
                if mask & (1 << i):
                    continue
                hit = False
                for p in fresh:
                    for c in active[(i, d.idx)].get(p, ()):
                        if c.source in times and c.target in times:
                            if times[c.target] - times[c.source] > c.delta:
                                hit = True
                                break
                    if hit:
                        break
                if hit:
                    mask |= 1 << i
        return mask

    def step(dctxs, committed, now, strict):
        counter[0] += 1
        if counter[0] > budget:
            raise _Budget()
        key = (frozenset(d.idx for d in dctxs),
               tuple(sorted(committed.items())), now, strict)
        if key in memo:
            return memo[key]

        ready, blocked = problem.ready_points(dctxs, committed)
        div = problem.next_divergence(dctxs, committed, now)
        out = set()

        if not ready and not blocked:
            out.add(0)
        else:
            for point in ready:
                for t in grid:
                    if t < now or (strict and t == now):
                        continue
                    if div is not None and t > div[0]:
                        break
                    trial = dict(committed)
                    trial[point] = t
                    delta = commit_mask(dctxs, trial, point)
                    out.update(delta | m for m in step(dctxs, trial, t, False))

            if div is not None:
                t, groups = div
                combos = {0}
                for group in groups:
                    sub = step(group, dict(committed), t, True)
                    combos = {m | s for m in combos for s in sub}
                    if not combos:
                        break
                out.update(combos)

        result = frozenset(out)
        memo[key] = result
        return result

    return step(problem.dctxs, {}, Fraction(0), False)


@dataclass
class DcResult:
    verdict: str                    # "controllable" | "not-controllable" | "unknown"
    strategy: Strategy = None
    evidence: str = None
    sample: str = None

    @property
    def controllable(self):
        return self.verdict == "controllable"

    def __str__(self):
        parts = [self.verdict]
        if self.evidence:
            parts.append(self.evidence)
        if self.sample:
            parts.append("(%s)" % self.sample)
        return "; ".join(parts)


def _strategy_from_table(network, table):
    """Convert the internal drama-indexed table to the kind-matching strategy."""
    kind = network.kind
    if kind in ("stn", "cstn"):
        return Strategy("cstn", {drama.scenario: sched for drama, sched in table.items()})
    if kind == "stnu":
        return Strategy("stnu", {drama.situation: sched for drama, sched in table.items()})
    return Strategy("cstnu", dict(table))


def check_dc(network, grid=3, max_letters=6, max_links=6, seed=0,
             exhaustive_points=6, exhaustive_budget=200_000):
    """Dynamic-controllability check over the sampled drama set.

    `seed` is accepted for CLI reproducibility; the search itself is
    deterministic.
    """
    report = validate(network)
    if not report.ok:
        raise ValueError("network does not validate:\n%s" % report)
    if len(network.letters) > max_letters:
        raise ValueError("letter cap exceeded: %d > %d" % (len(network.letters), max_letters))
    if len(network.links) > max_links:
        raise ValueError("link cap exceeded: %d > %d" % (len(network.links), max_links))

    scenarios = enumerate_scenarios(network.letters)
    situations = sample_situations(network.links, grid) if network.links else [()]
    dramas = [Drama(s, w) for s in scenarios for w in situations]
    sample = ("%d scenarios x %d sampled situations (duration grid %d per link)"
              % (len(scenarios), len(situations), grid))
    problem = _Problem(network, dramas)

    bad = problem.inconsistent_drama()
    if bad is not None:
        return DcResult("not-controllable",
                        evidence="projection for drama %s is inconsistent" % (bad.drama,),
                        sample=sample)

    table = _synthesize(problem)
    if table is not None:
        strategy = _strategy_from_table(network, table)
        if is_viable(network, strategy) and is_dynamic_star(network, strategy):
            return DcResult("controllable", strategy=strategy, sample=sample)

    if len(network.timepoints) <= exhaustive_points:
        times = candidate_time_grid(network, situations)
        table, exhausted = _exhaustive_witness(problem, times, exhaustive_budget)
        if table is not None:
            strategy = _strategy_from_table(network, table)
            if is_viable(network, strategy) and is_dynamic_star(network, strategy):
                return DcResult("controllable", strategy=strategy, sample=sample)
        if exhausted:
            return DcResult(
                "unknown",
                evidence="no viable decision tree over %d candidate times; "
                         "the grid may be too coarse" % len(times),
                sample=sample)

    return DcResult("unknown", evidence="search bounds hit without a verdict",
                    sample=sample)


def verify_cstn_embedding(network, **kwargs):
    """A CSTN and its link-free lifting get the same verdict."""
    from .model import embed_cstn

    if network.kind not in ("stn", "cstn"):
        raise ValueError("expected a network without contingent links")
    direct = check_dc(network, **kwargs)
    lifted = check_dc(embed_cstn(network), **kwargs)
    return direct.verdict == lifted.verdict


def verify_stnu_embedding(network, **kwargs):
    """An STNU and its empty-label lifting get the same verdict."""
    from .model import embed_stnu

    if network.kind not in ("stn", "stnu"):
        raise ValueError("expected a network without observation letters")
    direct = check_dc(network, **kwargs)
    lifted = check_dc(embed_stnu(network), **kwargs)
    return direct.verdict == lifted.verdict
