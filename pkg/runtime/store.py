from errors import StoreError
from runtime.supply import IntegerSupply
from runtime.values import NO_DECISION, FAIL, BindTo, LazyBind, Constraint, split_guards

_MISSING = object()
MAX_CHAIN = 100000 # Bound on representative hops, guards against cyclic rebasing


class DecisionStore:
    """
    Mutable map from raw identifier to decision, with an undo trail.

    Binding a variable (BindTo) binds its whole identifier subtree: an identifier
    below a bound variable is re-addressed into the target's subtree, so the
    argument variables of both sides are identified once a constructor is chosen.
    """
    def __init__(self, supply_model=IntegerSupply):
        self.geometry = supply_model
        self.entries = {}
        self.bound = set() # identifiers holding a BindTo entry
        self.trail = [] # (raw, previous decision or _MISSING)
        self.transactions = [] # (constraints, trail mark), LIFO
        self.obligations = [] # forced payload parts the search still has to solve
        self.forces = 0

    # Trail
    def mark(self):
        return len(self.trail)

    def undo_to(self, mark):
        while len(self.trail) > mark:
            raw, previous = self.trail.pop()
            self._write(raw, previous)

    def _set(self, raw, decision):
        self.trail.append((raw, self.entries.get(raw, _MISSING)))
        self._write(raw, _MISSING if decision is NO_DECISION else decision)

    def _write(self, raw, decision):
        if decision is _MISSING:
            self.entries.pop(raw, None)
            self.bound.discard(raw)
        else:
            self.entries[raw] = decision
            if isinstance(decision, BindTo):
                self.bound.add(raw)
            else:
                self.bound.discard(raw)

    def snapshot(self):
        return dict(self.entries)

    def is_empty(self):
        return not self.entries

    # Representatives
    def _binding_above(self, raw):
        # Nearest identifier at or above raw whose binding applies to raw
        best = None
        for root in self.bound:
            if root == raw:
                return root
            if self.geometry.is_below(raw, root):
                target = self.entries[root].target
                if self.geometry.is_below(target, root):
                    continue # variable bound into its own structure: only the root redirects
                if best is None or root.bit_length() > best.bit_length():
                    best = root
        return best

    def find(self, raw):
        for _ in range(MAX_CHAIN):
            if not self.bound:
                return raw
            root = self._binding_above(raw)
            if root is None:
                return raw
            target = self.entries[root].target
            raw = target if root == raw else self.geometry.rebase(raw, root, target)
        raise StoreError(f"Binding chain of {raw} does not terminate")

    def lookup(self, raw):
        return self.entries.get(self.find(raw), NO_DECISION)

    def set_decision(self, raw, decision):
        rep = self.find(raw)
        current = self.entries.get(rep, NO_DECISION)
        if decision.concrete and current.concrete and current is not decision:
            raise StoreError(f"Conflicting decision for {raw}: {current!r} vs {decision!r}")
        if isinstance(decision, BindTo):
            self._bind(rep, decision.target)
        else:
            self._set(rep, decision)

    # Constraints
    def apply(self, constraints):
        # All-or-nothing application without registering a transaction
        mark = self.mark()
        n_obligations = len(self.obligations)
        for constraint in constraints:
            if not self._add(constraint):
                self.undo_to(mark)
                del self.obligations[n_obligations:]
                return False
        return True

    def add_constraints(self, constraints):
        constraints = tuple(constraints)
        mark = self.mark()
        consistent = self.apply(constraints)
        if consistent:
            self.transactions.append((constraints, mark))
        return consistent

    def remove_constraints(self, constraints):
        if not self.transactions or self.transactions[-1][0] != tuple(constraints):
            raise StoreError("Constraints removed out of LIFO order")
        _, mark = self.transactions.pop()
        self.undo_to(mark)

    def _add(self, constraint):
        rep = self.find(constraint.id)
        decision = constraint.decision
        current = self.entries.get(rep, NO_DECISION)

        if isinstance(decision, BindTo):
            return self._bind(rep, decision.target)

        if isinstance(decision, LazyBind):
            if current is NO_DECISION:
                self._set(rep, decision)
                return True
            if isinstance(current, LazyBind):
                # Two lazy bindings: evaluate both and check they agree
                self._set(rep, NO_DECISION)
                return (self._apply_payload(current.pending) and
                        self._apply_payload(decision.pending))
            return self._apply_payload(decision.pending)

        # ChooseLeft / ChooseRight
        if current is NO_DECISION:
            self._set(rep, decision)
            return True
        if isinstance(current, LazyBind):
            if not self._force_entry(rep):
                return False
            return self._add(constraint)
        return current is decision

    def _bind(self, rep, target):
        target_rep = self.find(target)
        if target_rep == rep:
            return True
        current = self.entries.get(rep, NO_DECISION)

        moved = []
        if not self.geometry.is_below(target_rep, rep):
            moved = [(raw, decision) for raw, decision in self.entries.items()
                if raw != rep and self.geometry.is_below(raw, rep)]
            for raw, _ in moved:
                self._set(raw, NO_DECISION)

        self._set(rep, BindTo(target_rep))

        if current is not NO_DECISION and not self._add(Constraint(target_rep, current)):
            return False
        for raw, decision in moved:
            new_raw = self.geometry.rebase(raw, rep, target_rep)
            if not self._add(Constraint(new_raw, decision)):
                return False
        return True

    # Lazy bindings
    def _force_entry(self, rep):
        current = self.entries[rep]
        self._set(rep, NO_DECISION)
        return self._apply_payload(current.pending)

    def _apply_payload(self, pending):
        if not pending.forced:
            self.forces += 1
        constraints, rest = split_guards(pending)
        if rest is FAIL:
            return False
        if rest is not None:
            # Non-deterministic remainder, solved by the search
            self.obligations.append(rest)
        return all(self._add(c) for c in constraints)

    def force_lazy(self, raw, deterministic=False):
        """
        Force the lazy binding of raw. With deterministic, a payload that
        leaves choices to the search is undone as well and counts as failed.
        """
        rep = self.find(raw)
        current = self.entries.get(rep, NO_DECISION)
        if not isinstance(current, LazyBind):
            return True
        mark = self.mark()
        n_obligations = len(self.obligations)
        consistent = self._force_entry(rep)
        if consistent and not (deterministic and len(self.obligations) > n_obligations):
            return True
        self.undo_to(mark)
        del self.obligations[n_obligations:]
        return False

    def take_obligations(self):
        obligations = self.obligations
        self.obligations = []
        return obligations
