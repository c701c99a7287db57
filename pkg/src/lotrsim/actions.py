"""Legal-action enumeration for the five decision stages and the expert expansion filter.

Enumeration order is fixed: variant tag (declaration order below), then card ids
ascending, then subset bitmask ascending. Subset bitmasks index the stage's actor
list (untapped living characters, heroes first, allies in play order).
"""

from __future__ import annotations

from dataclasses import dataclass

from .state import DECISION_STAGES, LocationInPlay, Stage

SUBSET_CAP = 12


@dataclass(frozen=True, slots=True)
class PlayCard:
    card_id: str
    payment: tuple  # ((hero uid, amount), ...) with amount > 0, hero order


@dataclass(frozen=True, slots=True)
class EndPlanning:
    pass


@dataclass(frozen=True, slots=True)
class CommitSubset:
    members: frozenset


@dataclass(frozen=True, slots=True)
class TravelTo:
    location: int | None


@dataclass(frozen=True, slots=True)
class AssignDefenders:
    pairs: tuple  # ((enemy uid, defender uid or None), ...) in engagement order


@dataclass(frozen=True, slots=True)
class DeclareAttack:
    enemy: int
    attackers: frozenset


@dataclass(frozen=True, slots=True)
class Pass:
    pass


END_PLANNING = EndPlanning()
PASS = Pass()
EMPTY_COMMIT = CommitSubset(frozenset())
TRAVEL_NONE = TravelTo(None)


class NotADecisionStage(ValueError):
    pass


# -- planning ----------------------------------------------------------------

def payers(state, card_def):
    return [h for h in state.heroes if h.alive and h.card.defn.sphere is card_def.sphere]


def payment_splits(caps, cost):
    """All (x_1..x_m) with sum == cost and 0 <= x_i <= caps[i], lexicographic order."""
    out = []
    m = len(caps)
    tail = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        tail[i] = tail[i + 1] + caps[i]
    if tail[0] < cost:
        return out
    cur = [0] * m

    def rec(i, left):
        if i == m:
            if left == 0:
                out.append(tuple(cur))
            return
        lo = max(0, left - tail[i + 1])
        for x in range(lo, min(caps[i], left) + 1):
            cur[i] = x
            rec(i + 1, left - x)

    rec(0, cost)
    return out


def count_splits(caps, cost):
    if not caps:
        return 1 if cost == 0 else 0
    first, rest = caps[0], caps[1:]
    restcap = sum(rest)
    return sum(count_splits(rest, cost - x)
               for x in range(max(0, cost - restcap), min(first, cost) + 1))


def canonical_split(caps, cost):
    """Drain the largest pool first (ties by hero order); None if unaffordable."""
    if sum(caps) < cost:
        return None
    order = sorted(range(len(caps)), key=lambda i: (-caps[i], i))
    split = [0] * len(caps)
    left = cost
    for i in order:
        take = min(caps[i], left)
        split[i] = take
        left -= take
    return tuple(split)


def _payment(heroes, split):
    return tuple((h.card.uid, x) for h, x in zip(heroes, split) if x > 0)


def hand_defs(state):
    seen = {}
    for card in state.hand:
        seen.setdefault(card.defn.id, card.defn)
    return [seen[k] for k in sorted(seen)]


def planning_actions(state, canonical=False):
    out = []
    for d in hand_defs(state):
        hs = payers(state, d)
        caps = [h.resources for h in hs]
        if canonical:
            split = canonical_split(caps, d.cost)
            if split is not None:
                out.append(PlayCard(d.id, _payment(hs, split)))
        else:
            out.extend(PlayCard(d.id, _payment(hs, s)) for s in payment_splits(caps, d.cost))
    out.append(END_PLANNING)
    return out


# -- commitment --------------------------------------------------------------

def subset_sums(values):
    """sums[mask] for every mask over values."""
    sums = [0] * (1 << len(values))
    for mask in range(1, len(sums)):
        low = mask & -mask
        sums[mask] = sums[mask ^ low] + values[low.bit_length() - 1]
    return sums


def minimal_masks(values, threshold):
    """Masks whose sum exceeds threshold and that contain no qualifying proper subset."""
    found = []
    idx = [i for i, v in enumerate(values) if v > 0]

    def rec(pos, mask, total, smallest):
        if total > threshold:
            if total - smallest <= threshold:
                found.append(mask)
            return
        for j in range(pos, len(idx)):
            i = idx[j]
            rec(j + 1, mask | (1 << i), total + values[i], min(smallest, values[i]))

    rec(0, 0, 0, 1 << 30)
    found.sort()
    return found


def is_minimal(values, mask, threshold):
    total = 0
    smallest = 1 << 30
    for i, v in enumerate(values):
        if mask >> i & 1:
            total += v
            smallest = min(smallest, v)
    return total > threshold and total - smallest <= threshold


def commit_actions(state, minimal_only=False):
    actors = state.actors()
    wp = [c.card.defn.willpower for c in actors]
    threat = state.staging_threat()
    if minimal_only or len(actors) > SUBSET_CAP:
        masks = minimal_masks(wp, threat)
    else:
        sums = subset_sums(wp)
        masks = [m for m in range(1, len(sums)) if sums[m] > threat]
    out = [EMPTY_COMMIT]
    for m in masks:
        out.append(CommitSubset(frozenset(actors[i].card.uid for i in range(len(actors)) if m >> i & 1)))
    return out


# -- travel ------------------------------------------------------------------

def staging_locations(state):
    locs = [(x.card.defn.id, pos, x) for pos, x in enumerate(state.staging_area)
            if isinstance(x, LocationInPlay)]
    locs.sort(key=lambda t: (t[0], t[1]))
    return [x for _, _, x in locs]


def travel_actions(state):
    if state.active_location is not None:
        return [TRAVEL_NONE]
    return [TravelTo(x.card.uid) for x in staging_locations(state)] + [TRAVEL_NONE]


# -- defense -----------------------------------------------------------------

def defense_actions(state):
    enemies = state.engagement_area
    actors = state.actors()
    out = []
    cur = []
    used = [False] * len(actors)

    def rec(i):
        if i == len(enemies):
            out.append(AssignDefenders(tuple(cur)))
            return
        euid = enemies[i].card.uid
        cur.append((euid, None))
        rec(i + 1)
        cur.pop()
        for j, c in enumerate(actors):
            if not used[j]:
                used[j] = True
                cur.append((euid, c.card.uid))
                rec(i + 1)
                cur.pop()
                used[j] = False

    rec(0)
    return out


# -- attack ------------------------------------------------------------------

def attack_targets(state):
    targets = [(e.card.defn.id, pos, e) for pos, e in enumerate(state.engagement_area) if e.alive]
    targets.sort(key=lambda t: (t[0], t[1]))
    return [e for _, _, e in targets]


def attack_actions(state):
    actors = state.actors()
    out = []
    if actors:
        uids = [c.card.uid for c in actors]
        for e in attack_targets(state):
            for m in range(1, 1 << len(actors)):
                out.append(DeclareAttack(e.card.uid, frozenset(
                    uids[i] for i in range(len(uids)) if m >> i & 1)))
    out.append(PASS)
    return out


def legal_actions(state):
    stage = state.stage
    if stage == Stage.Planning:
        return planning_actions(state)
    if stage == Stage.CommitCharacters:
        return commit_actions(state)
    if stage == Stage.Travel:
        return travel_actions(state)
    if stage == Stage.DeclareDefenders:
        return defense_actions(state)
    if stage == Stage.DeclareAttackers:
        return attack_actions(state)
    raise NotADecisionStage(f"{Stage(stage).name} is not a decision stage")


def is_decision_stage(state):
    return state.stage in DECISION_STAGES


# -- expert expansion filter --------------------------------------------------

def defender_survives(attack, defender):
    return max(0, attack - defender.card.defn.defense) < defender.remaining


def undefended_target(heroes):
    """Hero that takes an undefended hit: most remaining hitpoints, ties by hero order."""
    best = None
    for h in heroes:
        if h.alive and (best is None or h.remaining > best.remaining):
            best = h
    return best


def chump_allowed(state, enemy, actors):
    """A doomed defender is acceptable only if nobody survives and the hit would kill a hero."""
    atk = enemy.card.defn.attack
    if any(defender_survives(atk, c) for c in actors):
        return False
    target = undefended_target(state.heroes)
    return target is not None and atk >= target.remaining


def defense_filter(state, actions):
    actors = state.actors()
    by_uid = {c.card.uid: c for c in actors}
    enemies = {e.card.uid: e for e in state.engagement_area}
    chump = {uid: chump_allowed(state, e, actors) for uid, e in enemies.items()}
    keep = []
    for a in actions:
        ok = True
        for euid, duid in a.pairs:
            if duid is None:
                continue
            if not (defender_survives(enemies[euid].card.defn.attack, by_uid[duid]) or chump[euid]):
                ok = False
                break
        if ok:
            keep.append(a)
    return keep


def expert_expansion_filter(state, actions):
    """Prune actions at expansion. The output is a non-empty subset of `actions` in
    enumeration order, except that the expert rule's choice (when kept) comes first."""
    if len(actions) <= 1:
        return list(actions)
    stage = state.stage
    if stage == Stage.Planning:
        allowed = set(planning_actions(state, canonical=True))
        keep = [a for a in actions if a in allowed]
    elif stage == Stage.CommitCharacters:
        # Minimal subsets ignore the card revealed after commitment, so the expert's
        # own commitment (which keeps a willpower margin) is kept as well.
        from .agents import expert_commit
        allowed = set(commit_actions(state, minimal_only=True))
        allowed.add(expert_commit(state))
        keep = [a for a in actions if a in allowed]
    elif stage == Stage.DeclareDefenders:
        keep = defense_filter(state, actions)
        fallback = AssignDefenders(tuple((e.card.uid, None) for e in state.engagement_area))
        if fallback in actions and fallback not in keep:
            keep.insert(0, fallback)
    else:
        keep = list(actions)
    return _expert_first(state, keep or list(actions))


def _expert_first(state, keep):
    # The expert's own choice leads the list, so enumeration-order tie-breaks favour it.
    from .agents import expert_decision
    preferred = expert_decision(state)
    if preferred in keep and keep[0] != preferred:
        keep.remove(preferred)
        keep.insert(0, preferred)
    return keep


def _filtered_commits(state):
    from .agents import COMMIT_MARGIN, cheapest_commit_mask
    actors = state.actors()
    wp = [c.card.defn.willpower for c in actors]
    threat = state.staging_threat()
    masks = set(minimal_masks(wp, threat))
    bar = threat + COMMIT_MARGIN if sum(wp) > threat + COMMIT_MARGIN else threat
    mine = cheapest_commit_mask(wp, bar)
    if mine and (len(actors) <= SUBSET_CAP or is_minimal(wp, mine, threat)):
        masks.add(mine)
    elif mine:
        mine = None  # the expert's subset is not on the legal list, so nothing moves
    first = [EMPTY_COMMIT] if mine == 0 else []
    rest = [] if mine == 0 else [EMPTY_COMMIT]
    for m in sorted(masks):
        a = CommitSubset(frozenset(actors[i].card.uid for i in range(len(actors)) if m >> i & 1))
        (first if m == mine else rest).append(a)
    return first + rest


def _filtered_planning(state):
    # One pass that yields both the canonical list and the expert's pick from it.
    out, best, best_key = [], None, None
    for d in hand_defs(state):
        hs = payers(state, d)
        split = canonical_split([h.resources for h in hs], d.cost)
        if split is None:
            continue
        out.append(PlayCard(d.id, _payment(hs, split)))
        key = (-d.willpower, d.cost, d.id)
        if best is None or key < best_key:
            best, best_key = len(out) - 1, key
    out.append(END_PLANNING)
    if best:
        out.insert(0, out.pop(best))
    return out


def _filtered_defenses(state):
    enemies = state.engagement_area
    actors = state.actors()
    options = []
    for e in enemies:
        chump = chump_allowed(state, e, actors)
        atk = e.card.defn.attack
        options.append([(j, c.card.uid) for j, c in enumerate(actors)
                        if chump or defender_survives(atk, c)])
    last = len(enemies)
    out, cur = [], []
    used = [False] * len(actors)

    def rec(i):
        if i == last:
            out.append(AssignDefenders(tuple(cur)))
            return
        euid = enemies[i].card.uid
        cur.append((euid, None))
        rec(i + 1)
        cur.pop()
        for j, duid in options[i]:
            if not used[j]:
                used[j] = True
                cur.append((euid, duid))
                rec(i + 1)
                cur.pop()
                used[j] = False

    rec(0)
    return out


def expansion_actions(state):
    """Same list as expert_expansion_filter(state, legal_actions(state)).

    It is built directly rather than by pruning the full legal list, which is where
    tree search used to spend most of its time.
    """
    stage = state.stage
    if stage == Stage.Planning:
        return _filtered_planning(state)
    if stage == Stage.CommitCharacters:
        return _filtered_commits(state)
    if stage == Stage.DeclareDefenders:
        keep = _filtered_defenses(state)
        return keep if len(keep) <= 1 else _expert_first(state, keep)
    return expert_expansion_filter(state, legal_actions(state))
