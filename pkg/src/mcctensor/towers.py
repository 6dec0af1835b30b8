"""Dyadic towers of finite level sets and the conditionally convergent sum.

A tower is a chain of finite labeled sets X_0 <- X_1 <- ... <- X_L (each
projection has 2-power fibers) together with a compatible family of
permutation actions generated level-by-level (the level groups are finite
2-groups) and, optionally, a distinguished shift permutation commuting with
the action.  The dyadic solenoid truncated at level L is the motivating
built-in: X_m = Z/2^m with reduction maps, the +1 rotation as both the
action generator and the shift.

Functions X_m -> B ("words") model germs of functions on the inverse limit:
a word at level m pulls back to every deeper level.  The kernel subgroup
K(m, h) — level-m action elements that project to the identity at level h —
plays the role of the scale-h stabilizer: a word (or an F2 table of words)
is "level-h invariant" when K(m, h) fixes it.

cc_sum evaluates the conditionally convergent sum of an F2 table over the
level-h fixed words; for tables invariant at the summation level the result
is independent of the level, which cc_sum re-checks by recomputation one
level deeper.
"""

from __future__ import annotations

import itertools

from .errors import (DepthError, InvarianceError, MissingShiftError,
                     ParseError, TowerValidationError)
from .f2cat import LabeledSet

GROUP_SIZE_CAP = 1 << 13


def act_word(perm, word):
    """Apply a level permutation to a word: (g.f)(g(x)) = f(x)."""
    out = [None] * len(word)
    for i, v in enumerate(word):
        out[perm[i]] = v
    return tuple(out)


def _perm_from_mapping(mapping, labels):
    index = {l: i for i, l in enumerate(labels)}
    perm = [None] * len(labels)
    for src, dst in mapping.items():
        if src not in index or dst not in index:
            raise TowerValidationError(
                f"permutation uses unknown label {src!r} -> {dst!r}")
        perm[index[src]] = index[dst]
    for i, v in enumerate(perm):
        if v is None:
            perm[i] = i  # labels not mentioned are fixed
    if sorted(perm) != list(range(len(labels))):
        raise TowerValidationError("permutation is not a bijection")
    return tuple(perm)


class DyadicTower:
    """A finite truncation of a pro-dyadic tower with a 2-group action.

    Parameters
    ----------
    level_sets : list of label iterables, levels 0..L in order.
    projections : list of dicts, projections[m] maps level-(m+1) labels to
        level-m labels (length L).
    generators : dict name -> list of per-level permutations (dicts
        label -> label, one per level).  All generators at a level together
        generate that level's group.
    shift : optional list of per-level permutations (dicts), the
        distinguished shift S.
    """

    def __init__(self, level_sets, projections, generators, shift=None, name=None):
        self.levels = [ls if isinstance(ls, LabeledSet) else LabeledSet(ls)
                       for ls in level_sets]
        if not self.levels:
            raise TowerValidationError("a tower needs at least one level")
        if len(projections) != len(self.levels) - 1:
            raise TowerValidationError(
                f"need {len(self.levels) - 1} projections for {len(self.levels)} levels, "
                f"got {len(projections)}")
        self.name = name

        # child -> parent index arrays
        self.child_to_parent = []
        for m, proj in enumerate(projections):
            child, parent = self.levels[m + 1], self.levels[m]
            arr = [None] * len(child)
            for c_label, p_label in proj.items():
                if c_label not in child.index:
                    raise TowerValidationError(
                        f"projection at level {m + 1}: unknown child label {c_label!r}")
                if p_label not in parent.index:
                    raise TowerValidationError(
                        f"projection at level {m + 1}: unknown parent label {p_label!r}")
                arr[child.index[c_label]] = parent.index[p_label]
            missing = [child.labels[i] for i, v in enumerate(arr) if v is None]
            if missing:
                raise TowerValidationError(
                    f"projection at level {m + 1} misses children {missing}")
            self.child_to_parent.append(tuple(arr))

        self.gen_names = tuple(sorted(generators))
        self.gens = {}
        for gname in self.gen_names:
            per_level = generators[gname]
            if len(per_level) != len(self.levels):
                raise TowerValidationError(
                    f"generator {gname!r} needs one permutation per level")
            self.gens[gname] = tuple(
                _perm_from_mapping(p, self.levels[m].labels)
                for m, p in enumerate(per_level))

        if shift is not None:
            if len(shift) != len(self.levels):
                raise TowerValidationError("shift needs one permutation per level")
            self.shift = tuple(_perm_from_mapping(p, self.levels[m].labels)
                               for m, p in enumerate(shift))
        else:
            self.shift = None

        self._groups = {}
        self._kernels = {}
        self._up = {}
        self._validate()

    # -- basic accessors -------------------------------------------------------

    @property
    def max_level(self):
        return len(self.levels) - 1

    def level(self, m):
        if not 0 <= m <= self.max_level:
            raise DepthError(f"level {m} out of range 0..{self.max_level}")
        return self.levels[m]

    def size(self, m):
        return len(self.level(m))

    def shift_perm(self, m):
        if self.shift is None:
            raise MissingShiftError("this tower has no shift permutation")
        self.level(m)
        return self.shift[m]

    def up_index(self, m_low, m_high):
        """Index array: position i at level m_high -> its image at m_low."""
        self.level(m_low)
        self.level(m_high)
        if m_low > m_high:
            raise DepthError(f"up_index needs m_low <= m_high, got {m_low} > {m_high}")
        key = (m_low, m_high)
        if key not in self._up:
            idx = list(range(self.size(m_high)))
            for l in range(m_high, m_low, -1):
                c2p = self.child_to_parent[l - 1]
                idx = [c2p[i] for i in idx]
            self._up[key] = tuple(idx)
        return self._up[key]

    # -- words ------------------------------------------------------------------

    def words(self, m, basis_labels):
        """All words X_m -> basis in lexicographic order (level labels major)."""
        return itertools.product(tuple(basis_labels), repeat=self.size(m))

    def pull_word(self, word, m_low, m_high):
        """Pull a level-m_low word back to level m_high along the projections."""
        if len(word) != self.size(m_low):
            raise DepthError(
                f"word length {len(word)} does not match level {m_low} size {self.size(m_low)}")
        up = self.up_index(m_low, m_high)
        return tuple(word[j] for j in up)

    def factor_level(self, word, m):
        """Least h such that the level-m word is constant on level-h fibers."""
        if len(word) != self.size(m):
            raise DepthError(
                f"word length {len(word)} does not match level {m} size {self.size(m)}")
        for h in range(m + 1):
            up = self.up_index(h, m)
            vals = {}
            ok = True
            for i, j in enumerate(up):
                if j in vals:
                    if vals[j] != word[i]:
                        ok = False
                        break
                else:
                    vals[j] = word[i]
            if ok:
                return h
        return m

    def compress_word(self, word, m, h):
        """The level-h word pulling back to this level-m word (must factor)."""
        up = self.up_index(h, m)
        out = [None] * self.size(h)
        for i, j in enumerate(up):
            if out[j] is None:
                out[j] = word[i]
            elif out[j] != word[i]:
                raise DepthError(
                    f"word {''.join(map(str, word))} does not factor through level {h}")
        return tuple(out)

    # -- groups and kernels -----------------------------------------------------

    def group(self, m):
        """All elements of the level-m action group, as permutation tuples."""
        self.level(m)
        if m not in self._groups:
            gens = [self.gens[g][m] for g in self.gen_names]
            ident = tuple(range(self.size(m)))
            seen = {ident}
            frontier = [ident]
            while frontier:
                nxt = []
                for p in frontier:
                    for g in gens:
                        q = tuple(g[p[i]] for i in range(len(p)))
                        if q not in seen:
                            if len(seen) >= GROUP_SIZE_CAP:
                                raise TowerValidationError(
                                    f"level-{m} group exceeds size cap {GROUP_SIZE_CAP}")
                            seen.add(q)
                            nxt.append(q)
                frontier = nxt
            self._groups[m] = tuple(sorted(seen))
        return self._groups[m]

    def kernel(self, m, h):
        """Level-m group elements that project to the identity at level h <= m."""
        self.level(m)
        self.level(h)
        if h > m:
            raise DepthError(f"kernel level {h} exceeds group level {m}")
        key = (m, h)
        if key not in self._kernels:
            up = self.up_index(h, m)
            self._kernels[key] = tuple(
                sigma for sigma in self.group(m)
                if all(up[sigma[i]] == up[i] for i in range(len(sigma))))
        return self._kernels[key]

    # -- structural validation ----------------------------------------------------

    def _validate(self):
        # fibers have 2-power cardinality
        for m, c2p in enumerate(self.child_to_parent):
            counts = {}
            for p in c2p:
                counts[p] = counts.get(p, 0) + 1
            for j in range(self.size(m)):
                c = counts.get(j, 0)
                if c == 0 or c & (c - 1):
                    raise TowerValidationError(
                        f"projection to level {m}: fiber over "
                        f"{self.levels[m].labels[j]!r} has size {c}, not a power of 2")

        # generators commute with projections, pairwise by name
        for gname in self.gen_names:
            perms = self.gens[gname]
            for m in range(self.max_level):
                c2p = self.child_to_parent[m]
                lower, upper = perms[m], perms[m + 1]
                for i in range(self.size(m + 1)):
                    if c2p[upper[i]] != lower[c2p[i]]:
                        raise TowerValidationError(
                            f"generator {gname!r} does not commute with the projection "
                            f"to level {m} at {self.levels[m + 1].labels[i]!r}")

        # each level group is a finite 2-group
        for m in range(self.max_level + 1):
            order = len(self.group(m))
            if order & (order - 1):
                raise TowerValidationError(
                    f"level-{m} group has order {order}, not a power of 2")

        # the shift commutes with the action and the projections
        if self.shift is not None:
            for m in range(self.max_level + 1):
                s = self.shift[m]
                for gname in self.gen_names:
                    g = self.gens[gname][m]
                    if any(s[g[i]] != g[s[i]] for i in range(len(s))):
                        raise TowerValidationError(
                            f"shift does not commute with generator {gname!r} at level {m}")
            for m in range(self.max_level):
                c2p = self.child_to_parent[m]
                s_low, s_high = self.shift[m], self.shift[m + 1]
                for i in range(self.size(m + 1)):
                    if c2p[s_high[i]] != s_low[c2p[i]]:
                        raise TowerValidationError(
                            f"shift does not commute with the projection to level {m}")

    def __repr__(self):
        nm = f" {self.name!r}" if self.name else ""
        return (f"DyadicTower{nm}(levels={[len(l) for l in self.levels]}, "
                f"gens={list(self.gen_names)}, shift={self.shift is not None})")


# -- built-in towers --------------------------------------------------------------

def dyadic_solenoid(max_level, copies=1):
    """The dyadic solenoid truncated at `max_level` (X_m = Z/2^m, +1 action
    and shift), or a disjoint union of `copies` such solenoids shifted in
    parallel (one +1 generator per copy, the shift rotating every copy)."""
    if max_level < 0:
        raise TowerValidationError("max_level must be >= 0")
    if copies < 1:
        raise TowerValidationError("copies must be >= 1")
    tags = [chr(ord("a") + c) for c in range(copies)] if copies > 1 else [""]

    def lab(tag, i):
        return f"{tag}{i}"

    level_sets = []
    for m in range(max_level + 1):
        level_sets.append([lab(t, i) for t in tags for i in range(2 ** m)])
    projections = []
    for m in range(max_level):
        projections.append({lab(t, i): lab(t, i % (2 ** m))
                            for t in tags for i in range(2 ** (m + 1))})
    generators = {}
    for t in tags:
        per_level = []
        for m in range(max_level + 1):
            p = {lab(t, i): lab(t, (i + 1) % (2 ** m)) for i in range(2 ** m)}
            per_level.append(p)
        generators[f"s{t}" if t else "s"] = per_level
    shift = []
    for m in range(max_level + 1):
        shift.append({lab(t, i): lab(t, (i + 1) % (2 ** m))
                      for t in tags for i in range(2 ** m)})
    name = "dyadic" if copies == 1 else f"dyadic-x{copies}"
    return DyadicTower(level_sets, projections, generators, shift=shift, name=name)


# -- invariance and the conditionally convergent sum --------------------------------

def invariance_level(tower, word, m):
    """Smallest h with the level-m word fixed by the kernel K(m, h)."""
    for h in range(m + 1):
        if all(act_word(s, word) == word for s in tower.kernel(m, h)):
            return h
    return m


def invariance_level_table(tower, support, m):
    """Smallest h with the F2 table (a support set of level-m words) fixed
    by the induced K(m, h) action on words."""
    support = frozenset(support)
    for h in range(m + 1):
        ok = True
        for s in tower.kernel(m, h):
            if any(act_word(s, w) not in support for w in support):
                ok = False
                break
        if ok:
            return h
    return m


def _invariance_witness(tower, support, m, h):
    """A violating orbit pair (w, g.w) if the table is not K(m, h)-invariant."""
    for s in tower.kernel(m, h):
        for w in sorted(support):
            moved = act_word(s, w)
            if moved not in support:
                return (w, moved)
    return None


def cc_sum(tower, basis_labels, support, depth, level, _recheck=True):
    """Conditionally convergent sum of an F2 table over level-`level` fixed words.

    The table is the extension by zero of `support` (level-`depth` words over
    `basis_labels`); the sum runs over the words fixed by the scale-`level`
    stabilizer.  The table must itself be invariant at that scale — validated
    eagerly, with a violating orbit pair in the error — and the result is
    independent of the level, re-checked here by recomputing one level deeper.
    """
    basis = set(basis_labels)
    support = frozenset(tuple(w) for w in support)
    for w in support:
        if len(w) != tower.size(depth):
            raise DepthError(
                f"support word length {len(w)} does not match level {depth}")
        if not set(w) <= basis:
            raise InvarianceError(f"support word {w!r} uses letters outside the basis")
    eff = min(level, depth)
    witness = _invariance_witness(tower, support, depth, eff)
    if witness is not None:
        raise InvarianceError(
            f"table is not invariant at level {level}: words {witness[0]!r} and "
            f"{witness[1]!r} lie in one orbit but only one is in the support",
            pair=witness)
    kern = tower.kernel(depth, eff)
    total = 0
    for w in support:
        if all(act_word(s, w) == w for s in kern):
            total ^= 1
    if _recheck and level < depth:
        deeper = cc_sum(tower, basis_labels, support, depth, level + 1, _recheck=False)
        assert deeper == total, "conditionally convergent sum changed across levels"
    return total


# -- tower text format ---------------------------------------------------------------
#
#   levels: 3
#   level 0: 0
#   level 1: 0 1
#   level 2: 0 1 2 3
#   proj 1:
#   0 -> 0
#   1 -> 1
#   2 -> 0      # (level-2 labels on the left, level-1 labels on the right)
#   3 -> 1
#   gen s 1: (0 1)
#   gen s 2: (0 1 2 3)
#   shift 1: (0 1)
#   shift 2: (0 1 2 3)
#
# Permutations are in cycle notation over that level's labels; fixed points
# may be omitted and "()" is the identity.  Levels without a gen/shift line
# get the identity.  Blank lines and #-comments are ignored.

def parse_cycles(text, labels, lineno=None):
    text = text.strip()
    mapping = {}
    if text == "()" or text == "":
        return mapping
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError(f"line {lineno}: cycles must look like (a b)(c d)", line=lineno)
    label_set = set(labels)
    for chunk in text[1:-1].split(")("):
        cyc = chunk.split()
        if any(l not in label_set for l in cyc):
            bad = [l for l in cyc if l not in label_set]
            raise ParseError(f"line {lineno}: unknown labels {bad} in cycle", line=lineno)
        if len(set(cyc)) != len(cyc):
            raise ParseError(f"line {lineno}: repeated label in cycle", line=lineno)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if a in mapping:
                raise ParseError(f"line {lineno}: label {a!r} moved twice", line=lineno)
            mapping[a] = b
    return mapping


def cycles_of(perm, labels):
    """Render an index permutation over `labels` in cycle notation."""
    seen = set()
    out = []
    for i in range(len(labels)):
        if i in seen or perm[i] == i:
            seen.add(i)
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append("(" + " ".join(labels[k] for k in cyc) + ")")
    return "".join(out) if out else "()"


def parse_tower(text, name=None):
    n_levels = None
    level_sets = {}
    projections = {}
    gen_lines = {}
    shift_lines = {}
    current_proj = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("levels:"):
            try:
                n_levels = int(line[len("levels:"):].strip())
            except ValueError:
                raise ParseError(f"line {lineno}: levels: needs an integer", line=lineno)
            current_proj = None
            continue
        if line.startswith("level "):
            head, _, rest = line.partition(":")
            try:
                m = int(head[len("level "):].strip())
            except ValueError:
                raise ParseError(f"line {lineno}: bad level header", line=lineno)
            level_sets[m] = rest.split()
            current_proj = None
            continue
        if line.startswith("proj "):
            head, _, rest = line.partition(":")
            try:
                m = int(head[len("proj "):].strip())
            except ValueError:
                raise ParseError(f"line {lineno}: bad proj header", line=lineno)
            projections[m] = {}
            current_proj = m
            if rest.strip():
                raise ParseError(
                    f"line {lineno}: proj entries go on following lines", line=lineno)
            continue
        if line.startswith("gen "):
            head, _, rest = line.partition(":")
            parts = head.split()
            if len(parts) != 3:
                raise ParseError(f"line {lineno}: expected 'gen NAME LEVEL:'", line=lineno)
            gname, m_str = parts[1], parts[2]
            try:
                m = int(m_str)
            except ValueError:
                raise ParseError(f"line {lineno}: bad gen level", line=lineno)
            gen_lines.setdefault(gname, {})[m] = (rest, lineno)
            current_proj = None
            continue
        if line.startswith("shift "):
            head, _, rest = line.partition(":")
            try:
                m = int(head[len("shift "):].strip())
            except ValueError:
                raise ParseError(f"line {lineno}: bad shift level", line=lineno)
            shift_lines[m] = (rest, lineno)
            current_proj = None
            continue
        if "->" in line and current_proj is not None:
            child, _, parent = line.partition("->")
            child, parent = child.strip(), parent.strip()
            if not child or not parent:
                raise ParseError(f"line {lineno}: bad projection entry", line=lineno)
            projections[current_proj][child] = parent
            continue
        raise ParseError(f"line {lineno}: unrecognized tower line {line!r}", line=lineno)

    if n_levels is None:
        raise ParseError("tower file needs a levels: header", line=1)
    try:
        sets = [level_sets[m] for m in range(n_levels)]
    except KeyError as e:
        raise ParseError(f"missing level {e.args[0]} declaration", line=1)
    projs = []
    for m in range(1, n_levels):
        if m not in projections:
            raise ParseError(f"missing proj {m}: block", line=1)
        projs.append(projections[m])

    generators = {}
    for gname, per in gen_lines.items():
        seq = []
        for m in range(n_levels):
            if m in per:
                text_m, ln = per[m]
                seq.append(parse_cycles(text_m, sets[m], lineno=ln))
            else:
                seq.append({})
        generators[gname] = seq
    if not generators:
        generators = {"id": [{} for _ in range(n_levels)]}

    shift = None
    if shift_lines:
        shift = []
        for m in range(n_levels):
            if m in shift_lines:
                text_m, ln = shift_lines[m]
                shift.append(parse_cycles(text_m, sets[m], lineno=ln))
            else:
                shift.append({})
    return DyadicTower(sets, projs, generators, shift=shift, name=name)


def dump_tower(tower):
    lines = [f"levels: {tower.max_level + 1}"]
    for m in range(tower.max_level + 1):
        lines.append(f"level {m}: " + " ".join(tower.levels[m].labels))
    for m in range(1, tower.max_level + 1):
        lines.append(f"proj {m}:")
        c2p = tower.child_to_parent[m - 1]
        for i, lab in enumerate(tower.levels[m].labels):
            lines.append(f"{lab} -> {tower.levels[m - 1].labels[c2p[i]]}")
    for gname in tower.gen_names:
        for m in range(tower.max_level + 1):
            lines.append(
                f"gen {gname} {m}: " + cycles_of(tower.gens[gname][m], tower.levels[m].labels))
    if tower.shift is not None:
        for m in range(tower.max_level + 1):
            lines.append(
                f"shift {m}: " + cycles_of(tower.shift[m], tower.levels[m].labels))
    return "\n".join(lines) + "\n"


def tower_from_reference(ref):
    """Resolve a tower reference: 'dyadic L' / 'dyadic L xK' built-ins."""
    parts = ref.split()
    if parts and parts[0] == "dyadic":
        if len(parts) == 2:
            return dyadic_solenoid(int(parts[1]))
        if len(parts) == 3 and parts[2].startswith("x"):
            return dyadic_solenoid(int(parts[1]), copies=int(parts[2][1:]))
    raise ParseError(f"unknown tower reference {ref!r} (expected e.g. 'dyadic 3')")
