# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled playout loop. Mirrors engine.py + agents.py rule for rule and draws from the
same SplitMix64 stream, so a playout returns the same outcome and leaves the stream in
the same position as the pure-Python path."""

from libc.stdint cimport uint64_t, int64_t
from libc.string cimport memset

cdef enum:
    MAXZ = 160
    MAXDEF = 256
    MAXSUM = 512
    SUBSET_CAP = 12
    REJECTION_CAP = 32
    THREAT_LIMIT = 50

cdef enum:
    K_HERO = 0
    K_ALLY = 1
    K_ENEMY = 2
    K_LOC = 3

cdef enum:
    S_RESOURCE = 0
    S_DRAW = 1
    S_PLANNING = 2
    S_COMMIT = 3
    S_REVEAL = 4
    S_QUEST = 5
    S_TRAVEL = 6
    S_ENCOUNTER = 7
    S_DEFEND = 8
    S_ENEMY_ATTACKS = 9
    S_DECLARE_ATTACK = 10
    S_PLAYER_ATTACKS = 11
    S_REFRESH = 12

cdef struct Def:
    int kind, sphere, cost, willpower, attack, defense, hp, engagement, threat, qp

cdef struct Ch:
    int d, damage, tapped, resources, committed

cdef struct Foe:
    int d, val

cdef struct G:
    int round, stage, threat, progress, target
    int nh
    Ch heroes[8]
    int na
    Ch allies[MAXZ]
    int nhand
    int hand[MAXZ]
    int npd
    int pdeck[MAXZ]
    int ned
    int edeck[MAXZ]
    int nex
    int edisc[MAXZ]
    int nst
    Foe staging[MAXZ]
    int nen
    Foe engaged[MAXZ]
    int act_d, act_p
    int npdef
    int pdef[MAXZ]
    int patk_e
    int npatk
    int patk[MAXZ]
    uint64_t rng


cdef inline uint64_t next_u64(G* g) noexcept nogil:
    cdef uint64_t z
    g.rng += <uint64_t>0x9E3779B97F4A7C15ULL
    z = g.rng
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline int below(G* g, int n) noexcept nogil:
    return <int>(((next_u64(g) >> 11) * <uint64_t>n) >> 53)


cdef inline void shuffle(G* g, int* a, int n) noexcept nogil:
    cdef int i, j, t
    i = n - 1
    while i > 0:
        j = below(g, i + 1)
        t = a[i]
        a[i] = a[j]
        a[j] = t
        i -= 1


def shuffle_list(list seq, uint64_t state):
    """Stream.shuffle on a Python list, in place; returns the advanced stream state."""
    cdef Py_ssize_t i = len(seq) - 1, j
    cdef uint64_t z
    while i > 0:
        state += <uint64_t>0x9E3779B97F4A7C15ULL
        z = state
        z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
        z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
        z = z ^ (z >> 31)
        j = <Py_ssize_t>(((z >> 11) * <uint64_t>(i + 1)) >> 53)
        seq[i], seq[j] = seq[j], seq[i]
        i -= 1
    return state


cdef class Kernel:
    cdef Def defs[MAXDEF]
    cdef int ndefs
    cdef int margin
    cdef G g

    def __init__(self, rows, int commit_margin=0):
        cdef int i
        self.margin = commit_margin
        if len(rows) > MAXDEF:
            raise ValueError("card table too large for the kernel")
        self.ndefs = len(rows)
        for i, r in enumerate(rows):
            self.defs[i].kind = r[0]
            self.defs[i].sphere = r[1]
            self.defs[i].cost = r[2]
            self.defs[i].willpower = r[3]
            self.defs[i].attack = r[4]
            self.defs[i].defense = r[5]
            self.defs[i].hp = r[6]
            self.defs[i].engagement = r[7]
            self.defs[i].threat = r[8]
            self.defs[i].qp = r[9]

    def playout(self, const int[:] buf, bint expert, uint64_t seed, bint shuffle_first):
        """Returns (status code, stream state): 0 win, 1 threat loss, 2 heroes dead."""
        cdef G* g = &self.g
        cdef int status
        self._load(buf)
        g.rng = seed
        if shuffle_first:
            shuffle(g, g.pdeck, g.npd)
            shuffle(g, g.edeck, g.ned)
        with nogil:
            status = self._run(expert)
        return status, g.rng

    cdef void _load(self, const int[:] b) except *:
        cdef G* g = &self.g
        cdef int p = 0, i, n
        g.round = b[0]; g.stage = b[1]; g.threat = b[2]; g.progress = b[3]; g.target = b[4]
        p = 5
        n = b[p]; p += 1
        if n > 8:
            raise ValueError("too many heroes for the kernel")
        g.nh = n
        for i in range(n):
            g.heroes[i].d = b[p]; g.heroes[i].damage = b[p + 1]; g.heroes[i].tapped = b[p + 2]
            g.heroes[i].resources = b[p + 3]; g.heroes[i].committed = b[p + 4]
            p += 5
        n = b[p]; p += 1
        g.na = n
        for i in range(n):
            g.allies[i].d = b[p]; g.allies[i].damage = b[p + 1]; g.allies[i].tapped = b[p + 2]
            g.allies[i].resources = b[p + 3]; g.allies[i].committed = b[p + 4]
            p += 5
        n = b[p]; p += 1
        g.nhand = n
        for i in range(n):
            g.hand[i] = b[p]; p += 1
        n = b[p]; p += 1
        g.npd = n
        for i in range(n):
            g.pdeck[i] = b[p]; p += 1
        n = b[p]; p += 1
        g.ned = n
        for i in range(n):
            g.edeck[i] = b[p]; p += 1
        n = b[p]; p += 1
        g.nex = n
        for i in range(n):
            g.edisc[i] = b[p]; p += 1
        n = b[p]; p += 1
        g.nst = n
        for i in range(n):
            g.staging[i].d = b[p]; g.staging[i].val = b[p + 1]; p += 2
        n = b[p]; p += 1
        g.nen = n
        for i in range(n):
            g.engaged[i].d = b[p]; g.engaged[i].val = b[p + 1]; p += 2
        g.act_d = b[p]; g.act_p = b[p + 1]; p += 2
        n = b[p]; p += 1
        g.npdef = n
        for i in range(n if n > 0 else 0):
            g.pdef[i] = b[p]; p += 1
        g.patk_e = b[p]; n = b[p + 1]; p += 2
        g.npatk = n
        for i in range(n):
            g.patk[i] = b[p]; p += 1
        if g.na + g.nh > 64:
            raise ValueError("too many characters for the kernel")

    # -- helpers ---------------------------------------------------------------

    cdef inline Ch* ch(self, int i) noexcept nogil:
        if i < self.g.nh:
            return &self.g.heroes[i]
        return &self.g.allies[i - self.g.nh]

    cdef inline bint alive(self, Ch* c) noexcept nogil:
        return c.damage < self.defs[c.d].hp

    cdef int actors(self, int* out) noexcept nogil:
        cdef int i, n = 0
        cdef Ch* c
        for i in range(self.g.nh + self.g.na):
            c = self.ch(i)
            if not c.tapped and self.alive(c):
                out[n] = i
                n += 1
        return n

    cdef int staging_threat(self) noexcept nogil:
        cdef int i, t = 0
        for i in range(self.g.nst):
            t += self.defs[self.g.staging[i].d].threat
        return t

    cdef int terminal(self) noexcept nogil:
        cdef int i
        cdef bint any_alive = False
        if self.g.threat >= THREAT_LIMIT:
            return 1
        for i in range(self.g.nh):
            if self.alive(&self.g.heroes[i]):
                any_alive = True
                break
        if not any_alive:
            return 2
        if self.g.progress >= self.g.target:
            return 0
        return -1

    cdef inline void draw(self) noexcept nogil:
        if self.g.npd > 0:
            self.g.npd -= 1
            self.g.hand[self.g.nhand] = self.g.pdeck[self.g.npd]
            self.g.nhand += 1

    # -- ruled stages ------------------------------------------------------------

    cdef void resource(self) noexcept nogil:
        cdef int i
        for i in range(self.g.nh):
            if self.alive(&self.g.heroes[i]):
                self.g.heroes[i].resources += 1
        self.draw()
        self.g.stage = S_PLANNING

    cdef void reveal(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int i
        if g.ned == 0 and g.nex > 0:
            for i in range(g.nex):
                g.edeck[i] = g.edisc[i]
            g.ned = g.nex
            g.nex = 0
            shuffle(g, g.edeck, g.ned)
        if g.ned > 0:
            g.ned -= 1
            g.staging[g.nst].d = g.edeck[g.ned]
            g.staging[g.nst].val = 0
            g.nst += 1
        g.stage = S_QUEST

    cdef void quest(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int i, w = 0, diff, used, room
        cdef Ch* c
        for i in range(g.nh + g.na):
            c = self.ch(i)
            if c.committed:
                w += self.defs[c.d].willpower
        diff = w - self.staging_threat()
        if diff > 0:
            if g.act_d >= 0:
                room = self.defs[g.act_d].qp - g.act_p
                used = diff if diff < room else room
                g.act_p += used
                diff -= used
                if g.act_p >= self.defs[g.act_d].qp:
                    g.edisc[g.nex] = g.act_d
                    g.nex += 1
                    g.act_d = -1
            g.progress += diff
            if g.progress > g.target:
                g.progress = g.target
        elif diff < 0:
            g.threat -= diff
        g.stage = S_TRAVEL

    cdef void encounter(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int i, keep = 0
        cdef Def* d
        for i in range(g.nst):
            d = &self.defs[g.staging[i].d]
            if d.kind == K_ENEMY and d.engagement <= g.threat:
                g.engaged[g.nen] = g.staging[i]
                g.nen += 1
            else:
                g.staging[keep] = g.staging[i]
                keep += 1
        g.nst = keep
        g.stage = S_DEFEND

    cdef int undefended_target(self) noexcept nogil:
        cdef int i, best = -1, rem, best_rem = 0
        for i in range(self.g.nh):
            if self.alive(&self.g.heroes[i]):
                rem = self.defs[self.g.heroes[i].d].hp - self.g.heroes[i].damage
                if best < 0 or rem > best_rem:
                    best = i
                    best_rem = rem
        return best

    cdef void enemy_attacks(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int i, atk, dmg, h
        cdef Ch* c
        for i in range(g.nen):
            atk = self.defs[g.engaged[i].d].attack
            if g.npdef > i and g.pdef[i] >= 0:
                c = self.ch(g.pdef[i])
                dmg = atk - self.defs[c.d].defense
                if dmg > 0:
                    c.damage += dmg
                continue
            h = self.undefended_target()
            if h < 0:
                break
            g.heroes[h].damage += atk
        g.npdef = -1
        g.stage = S_DECLARE_ATTACK

    cdef void player_attacks(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int i, total = 0, dmg
        cdef int buf[64]
        cdef bint live = False
        if g.patk_e >= 0:
            for i in range(g.npatk):
                total += self.defs[self.ch(g.patk[i]).d].attack
            dmg = total - self.defs[g.engaged[g.patk_e].d].defense
            if dmg > 0:
                g.engaged[g.patk_e].val += dmg
            g.patk_e = -1
            g.npatk = 0
        for i in range(g.nen):
            if g.engaged[i].val < self.defs[g.engaged[i].d].hp:
                live = True
                break
        if live and self.actors(buf) > 0:
            g.stage = S_DECLARE_ATTACK
        else:
            g.stage = S_REFRESH

    cdef void refresh(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int i, keep
        keep = 0
        for i in range(g.nh):
            if self.alive(&g.heroes[i]):
                g.heroes[keep] = g.heroes[i]
                g.heroes[keep].tapped = 0
                g.heroes[keep].committed = 0
                keep += 1
        g.nh = keep
        keep = 0
        for i in range(g.na):
            if self.alive(&g.allies[i]):
                g.allies[keep] = g.allies[i]
                g.allies[keep].tapped = 0
                g.allies[keep].committed = 0
                keep += 1
        g.na = keep
        keep = 0
        for i in range(g.nen):
            if g.engaged[i].val < self.defs[g.engaged[i].d].hp:
                g.engaged[keep] = g.engaged[i]
                keep += 1
            else:
                g.edisc[g.nex] = g.engaged[i].d
                g.nex += 1
        g.nen = keep
        g.threat += 1
        g.round += 1
        g.stage = S_RESOURCE

    # -- planning --------------------------------------------------------------

    cdef int payers(self, int d, int* who, int* caps) noexcept nogil:
        cdef int i, m = 0
        for i in range(self.g.nh):
            if self.alive(&self.g.heroes[i]) and self.defs[self.g.heroes[i].d].sphere == self.defs[d].sphere:
                who[m] = i
                caps[m] = self.g.heroes[i].resources
                m += 1
        return m

    cdef void play(self, int d, int m, int* who, int* split) noexcept nogil:
        cdef G* g = &self.g
        cdef int i, at = -1
        for i in range(m):
            g.heroes[who[i]].resources -= split[i]
        for i in range(g.nhand):
            if g.hand[i] == d:
                at = i
                break
        for i in range(at, g.nhand - 1):
            g.hand[i] = g.hand[i + 1]
        g.nhand -= 1
        g.allies[g.na].d = d
        g.allies[g.na].damage = 0
        g.allies[g.na].tapped = 0
        g.allies[g.na].resources = 0
        g.allies[g.na].committed = 0
        g.na += 1

    cdef void hand_presence(self, char* present) noexcept nogil:
        cdef int i
        memset(present, 0, self.ndefs)
        for i in range(self.g.nhand):
            present[self.g.hand[i]] = 1

    cdef bint canonical(self, int m, int* caps, int cost, int* split) noexcept nogil:
        cdef int i, j, total = 0, left, best, take
        cdef char used[8]
        for i in range(m):
            total += caps[i]
            split[i] = 0
            used[i] = 0
        if total < cost:
            return False
        left = cost
        for j in range(m):
            best = -1
            for i in range(m):
                if not used[i] and (best < 0 or caps[i] > caps[best]):
                    best = i
            used[best] = 1
            take = caps[best] if caps[best] < left else left
            split[best] = take
            left -= take
        return True

    cdef void expert_plan(self) noexcept nogil:
        cdef char present[MAXDEF]
        cdef int who[8]
        cdef int caps[8]
        cdef int split[8]
        cdef int bwho[8]
        cdef int bsplit[8]
        cdef int d, m, i, best = -1, bm = 0
        cdef Def* x
        cdef Def* y
        self.hand_presence(present)
        for d in range(self.ndefs):
            if not present[d]:
                continue
            m = self.payers(d, who, caps)
            if not self.canonical(m, caps, self.defs[d].cost, split):
                continue
            x = &self.defs[d]
            if best >= 0:
                y = &self.defs[best]
                if x.willpower < y.willpower or (x.willpower == y.willpower and x.cost >= y.cost):
                    continue
            best = d
            bm = m
            for i in range(m):
                bwho[i] = who[i]
                bsplit[i] = split[i]
        if best < 0:
            self.g.stage = S_COMMIT
        else:
            self.play(best, bm, bwho, bsplit)

    cdef int64_t count_splits(self, int* caps, int m, int cost) noexcept nogil:
        cdef int i, x, lo, hi, rest = 0
        cdef int64_t n = 0
        if m == 0:
            return 1 if cost == 0 else 0
        for i in range(1, m):
            rest += caps[i]
        lo = cost - rest
        if lo < 0:
            lo = 0
        hi = caps[0] if caps[0] < cost else cost
        for x in range(lo, hi + 1):
            n += self.count_splits(caps + 1, m - 1, cost - x)
        return n

    cdef void random_plan(self) noexcept nogil:
        cdef char present[MAXDEF]
        cdef int who[8]
        cdef int caps[8]
        cdef int split[8]
        cdef int d, m, i, x, lo, hi, rest, left
        cdef int64_t total = 1, n, idx, c
        self.hand_presence(present)
        for d in range(self.ndefs):
            if present[d]:
                m = self.payers(d, who, caps)
                total += self.count_splits(caps, m, self.defs[d].cost)
        if total == 1:
            self.g.stage = S_COMMIT
            return
        idx = below(&self.g, <int>total)
        for d in range(self.ndefs):
            if not present[d]:
                continue
            m = self.payers(d, who, caps)
            n = self.count_splits(caps, m, self.defs[d].cost)
            if idx >= n:
                idx -= n
                continue
            left = self.defs[d].cost
            for i in range(m):
                rest = 0
                for x in range(i + 1, m):
                    rest += caps[x]
                lo = left - rest
                if lo < 0:
                    lo = 0
                hi = caps[i] if caps[i] < left else left
                for x in range(lo, hi + 1):
                    c = self.count_splits(caps + i + 1, m - i - 1, left - x)
                    if idx < c:
                        split[i] = x
                        left -= x
                        break
                    idx -= c
            self.play(d, m, who, split)
            return
        self.g.stage = S_COMMIT

    # -- commitment ------------------------------------------------------------

    cdef void commit_mask(self, int* act, int k, uint64_t mask) noexcept nogil:
        cdef int i
        cdef Ch* c
        for i in range(k):
            if (mask >> i) & 1:
                c = self.ch(act[i])
                c.tapped = 1
                c.committed = 1
        self.g.stage = S_REVEAL

    cdef void expert_commit(self) noexcept nogil:
        cdef int act[64]
        cdef unsigned char reach[65][MAXSUM]
        cdef int k, i, s, v, threat, total = 0, need = -1
        cdef uint64_t mask = 0
        k = self.actors(act)
        threat = self.staging_threat()
        for i in range(k):
            total += self.defs[self.ch(act[i]).d].willpower
        if total > threat + self.margin:
            threat += self.margin
        if total <= threat:
            self.g.stage = S_REVEAL
            return
        if total >= MAXSUM:
            total = MAXSUM - 1
        memset(reach[0], 0, total + 1)
        reach[0][0] = 1
        for i in range(k):
            v = self.defs[self.ch(act[i]).d].willpower
            for s in range(total + 1):
                reach[i + 1][s] = reach[i][s] or (s >= v and reach[i][s - v])
        for s in range(threat + 1, total + 1):
            if reach[k][s]:
                need = s
                break
        if need < 0:
            self.g.stage = S_REVEAL
            return
        i = k - 1
        while i >= 0:
            if not reach[i][need]:
                mask |= (<uint64_t>1) << i
                need -= self.defs[self.ch(act[i]).d].willpower
            i -= 1
        self.commit_mask(act, k, mask)

    cdef void random_commit(self) noexcept nogil:
        cdef int act[64]
        cdef int wp[64]
        cdef int k, i, t, threat, total = 0, smallest
        cdef uint64_t mask
        k = self.actors(act)
        threat = self.staging_threat()
        for i in range(k):
            wp[i] = self.defs[self.ch(act[i]).d].willpower
            total += wp[i]
        if total <= threat:
            self.g.stage = S_REVEAL
            return
        for t in range(REJECTION_CAP):
            mask = next_u64(&self.g) >> (64 - k)
            total = 0
            smallest = 1 << 30
            for i in range(k):
                if (mask >> i) & 1:
                    total += wp[i]
                    if wp[i] < smallest:
                        smallest = wp[i]
            if total <= threat:
                continue
            if k > SUBSET_CAP and total - smallest > threat:
                continue
            self.commit_mask(act, k, mask)
            return
        self.g.stage = S_REVEAL

    # -- travel ----------------------------------------------------------------

    cdef void expert_travel(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int i, best = -1
        cdef Def* x
        cdef Def* y
        if g.act_d < 0:
            for i in range(g.nst):
                x = &self.defs[g.staging[i].d]
                if x.kind != K_LOC:
                    continue
                if best >= 0:
                    y = &self.defs[g.staging[best].d]
                    if x.threat < y.threat:
                        continue
                    if x.threat == y.threat and g.staging[i].d >= g.staging[best].d:
                        continue
                best = i
            if best >= 0:
                g.act_d = g.staging[best].d
                g.act_p = g.staging[best].val
                for i in range(best, g.nst - 1):
                    g.staging[i] = g.staging[i + 1]
                g.nst -= 1
        g.stage = S_ENCOUNTER

    # -- defense -----------------------------------------------------------------

    cdef inline bint survives(self, int atk, Ch* c) noexcept nogil:
        cdef int dmg = atk - self.defs[c.d].defense
        if dmg < 0:
            dmg = 0
        return dmg < self.defs[c.d].hp - c.damage

    cdef void set_defense(self) noexcept nogil:
        cdef int i
        for i in range(self.g.nen):
            if self.g.pdef[i] >= 0:
                self.ch(self.g.pdef[i]).tapped = 1
        self.g.npdef = self.g.nen
        self.g.stage = S_ENEMY_ATTACKS

    cdef void expert_defend(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int free_[64]
        cdef int order[MAXZ]
        cdef int nf, i, j, t, e, atk, pick
        cdef Ch* c
        nf = self.actors(free_)
        for i in range(g.nen):
            order[i] = i
            g.pdef[i] = -1
        # stable insertion sort by attack, descending
        for i in range(1, g.nen):
            t = order[i]
            j = i - 1
            while j >= 0 and self.defs[g.engaged[order[j]].d].attack < self.defs[g.engaged[t].d].attack:
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = t
        for i in range(g.nen):
            e = order[i]
            atk = self.defs[g.engaged[e].d].attack
            pick = -1
            for j in range(nf):
                c = self.ch(free_[j])
                if self.survives(atk, c) and (pick < 0 or self.defs[c.d].defense < self.defs[self.ch(free_[pick]).d].defense):
                    pick = j
            if pick >= 0:
                g.pdef[e] = free_[pick]
                for j in range(pick, nf - 1):
                    free_[j] = free_[j + 1]
                nf -= 1
        self.set_defense()

    cdef void random_defend(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int free_[64]
        cdef int nf, i, j, pick
        nf = self.actors(free_)
        for i in range(g.nen):
            g.pdef[i] = -1
        if g.nen > 0 and nf > 0:
            for i in range(g.nen):
                if nf == 0:
                    break
                pick = below(g, nf)
                g.pdef[i] = free_[pick]
                for j in range(pick, nf - 1):
                    free_[j] = free_[j + 1]
                nf -= 1
        self.set_defense()

    # -- attack ----------------------------------------------------------------

    cdef void expert_attack(self) noexcept nogil:
        cdef G* g = &self.g
        cdef int hit[64]
        cdef int order[MAXZ]
        cdef int nh, ne = 0, i, j, t, e, need, total, cnt
        nh = self.actors(hit)
        if nh > 0:
            for i in range(1, nh):
                t = hit[i]
                j = i - 1
                while j >= 0 and self.defs[self.ch(hit[j]).d].attack < self.defs[self.ch(t).d].attack:
                    hit[j + 1] = hit[j]
                    j -= 1
                hit[j + 1] = t
            for i in range(g.nen):
                if g.engaged[i].val < self.defs[g.engaged[i].d].hp:
                    order[ne] = i
                    ne += 1
            for i in range(1, ne):
                t = order[i]
                j = i - 1
                while j >= 0 and self.defs[g.engaged[order[j]].d].attack < self.defs[g.engaged[t].d].attack:
                    order[j + 1] = order[j]
                    j -= 1
                order[j + 1] = t
            for i in range(ne):
                e = order[i]
                need = self.defs[g.engaged[e].d].hp - g.engaged[e].val + self.defs[g.engaged[e].d].defense
                total = 0
                cnt = 0
                for j in range(nh):
                    if self.defs[self.ch(hit[j]).d].attack <= 0:
                        break
                    total += self.defs[self.ch(hit[j]).d].attack
                    cnt += 1
                    if total >= need:
                        for t in range(cnt):
                            self.ch(hit[t]).tapped = 1
                            g.patk[t] = hit[t]
                        g.npatk = cnt
                        g.patk_e = e
                        g.stage = S_PLAYER_ATTACKS
                        return
        g.stage = S_REFRESH

    # -- main loop -----------------------------------------------------------------

    cdef int _run(self, bint expert) noexcept nogil:
        cdef int status, st
        while True:
            status = self.terminal()
            if status >= 0:
                return status
            st = self.g.stage
            if st == S_RESOURCE:
                self.resource()
            elif st == S_DRAW:
                self.draw()
                self.g.stage = S_PLANNING
            elif st == S_PLANNING:
                if expert:
                    self.expert_plan()
                else:
                    self.random_plan()
            elif st == S_COMMIT:
                if expert:
                    self.expert_commit()
                else:
                    self.random_commit()
            elif st == S_REVEAL:
                self.reveal()
            elif st == S_QUEST:
                self.quest()
            elif st == S_TRAVEL:
                self.expert_travel()
            elif st == S_ENCOUNTER:
                self.encounter()
            elif st == S_DEFEND:
                if expert:
                    self.expert_defend()
                else:
                    self.random_defend()
            elif st == S_ENEMY_ATTACKS:
                self.enemy_attacks()
            elif st == S_DECLARE_ATTACK:
                self.expert_attack()
            elif st == S_PLAYER_ATTACKS:
                self.player_attacks()
            else:
                self.refresh()
