"""
Post-processing Service - end-of-step restructuring strategies

Swap, merge and split only re-map categories to clusters (module A stays as it is).
Compress rewrites module A through a frozen inner fuzzy ARTMAP, and prune-and-reassign
relabels inactive satellite categories.
"""

import logging
from functools import reduce
from typing import List, Optional, Tuple

import numpy as np

from src.models.edit_model import Edit, MergeEdit, MoveEdit
from src.models.category_model import Category, ModuleA
from src.models.icvi_model import IcviState
from src.models.network_model import TopoArtmapNetwork
from src.schemas.config_schemas import SplitType
from src.services import stats_service
from src.services.art_service import art_service
from src.services.icvi_service import icvi_service
from src.services.mapfield_service import mapfield_service
from src.utils.exceptions import CompressionNotConvergedError

logger = logging.getLogger(__name__)


class PostprocService:
    """Service for swap, merge, split, compress and prune-and-reassign"""

    def run(self, network: TopoArtmapNetwork) -> None:
        config = network.config
        if config.en_merge:
            self.merge_clusters(network)
        if config.en_split:
            self.split(network)
        if config.en_swap:
            self.swap(network)
        if config.en_compress:
            self.compress(network)
        if config.en_prune_reassign:
            self.prune_and_reassign(network)

    def apply(self, network: TopoArtmapNetwork, edit: Edit) -> None:
        icvi_service.restructure(network.icvi, edit, network.module_a)
        mapfield_service.apply_edit(network.map_field, edit)
        logger.debug(f"Applied {edit}; k={network.icvi.k}")

    def _members(self, state: IcviState, c: int) -> np.ndarray:
        return np.flatnonzero(state.proto_labels == c)

    # ---- swap -------------------------------------------------------------

    def swap(self, network: TopoArtmapNetwork) -> int:
        state, module_a = network.icvi, network.module_a
        applied = 0

        while module_a.size > 2 and state.value is not None:
            best_value, best_edit = state.value, None
            labels = state.proto_labels
            sizes = np.bincount(labels, minlength=state.k)

            for p in range(module_a.size):
                source = int(labels[p])
                if sizes[source] == 1 and state.k <= 2:
                    continue
                linked = np.flatnonzero(module_a.conn[p] > 0)
                targets = sorted(set(labels[linked].tolist()) - {source})
                for target in targets:
                    edit = MoveEdit(category=p, target=int(target))
                    value = icvi_service.preview(state, [edit], module_a)
                    if icvi_service.is_better(state, value, best_value):
                        best_value, best_edit = value, edit

            if best_edit is None:
                break
            self.apply(network, best_edit)
            applied += 1

        return applied

    # ---- merge ------------------------------------------------------------

    def merge_clusters(self, network: TopoArtmapNetwork) -> int:
        """Greedy agglomeration down to two clusters; keep the best stage if it improves"""
        state, module_a = network.icvi, network.module_a
        if state.k <= 2 or state.v != 0 or state.value is None:
            return 0

        trial = state.clone()
        path: List[Edit] = []
        best_value, best_path = state.value, []

        while trial.k > 2:
            stage_value, stage_edit = None, None
            for a in range(trial.k):
                for b in range(a + 1, trial.k):
                    edit = MergeEdit(keep=a, absorb=b)
                    value = icvi_service.preview(trial, [edit], module_a)
                    if stage_edit is None or icvi_service.is_better(trial, value, stage_value):
                        stage_value, stage_edit = value, edit

            icvi_service.restructure(trial, stage_edit, module_a)
            path.append(stage_edit)
            if icvi_service.is_better(state, trial.value, best_value):
                best_value, best_path = trial.value, list(path)

        for edit in best_path:
            self.apply(network, edit)
        if best_path:
            logger.debug(f"Merge strategy folded {len(best_path)} cluster pairs")
        return len(best_path)

    # ---- split ------------------------------------------------------------

    def split(self, network: TopoArtmapNetwork) -> int:
        if network.icvi.v <= network.config.tau:
            return 0
        if network.config.s_type == SplitType.FULL:
            return self.split_full_decomposition(network)
        if network.config.s_type == SplitType.PARTIAL:
            return self.split_partial_decomposition(network)
        return self.split_activity(network)

    def split_activity(self, network: TopoArtmapNetwork) -> int:
        """The most recently active category that shares its cluster becomes a cluster"""
        state, module_a = network.icvi, network.module_a
        sizes = np.bincount(state.proto_labels, minlength=state.k)

        for p in np.argsort(module_a.inactivity, kind="stable"):
            if sizes[state.proto_labels[p]] > 1:
                self.apply(network, MoveEdit(category=int(p), target=state.k))
                return 1
        return 0

    def _remerge_pieces(
        self, trial: IcviState, pieces: List[int], path: List[Edit], module_a: ModuleA
    ) -> None:
        while len(pieces) > 1:
            best_value, best_edit = trial.value, None
            for i, a in enumerate(pieces):
                for b in pieces[i + 1 :]:
                    edit = MergeEdit(keep=min(a, b), absorb=max(a, b))
                    value = icvi_service.preview(trial, [edit], module_a)
                    if icvi_service.is_better(trial, value, best_value):
                        best_value, best_edit = value, edit
            if best_edit is None:
                return

            icvi_service.restructure(trial, best_edit, module_a)
            path.append(best_edit)
            pieces.remove(best_edit.absorb)
            pieces[:] = [q - 1 if q > best_edit.absorb else q for q in pieces]

    def split_full_decomposition(self, network: TopoArtmapNetwork) -> int:
        state, module_a = network.icvi, network.module_a
        applied = 0

        while True:
            best_value, best_path = state.value, None
            for c in range(state.k):
                members = self._members(state, c)
                if len(members) < 2:
                    continue

                trial = state.clone()
                path: List[Edit] = []
                pieces = [c]
                for p in members[1:]:
                    edit = MoveEdit(category=int(p), target=trial.k)
                    icvi_service.restructure(trial, edit, module_a)
                    path.append(edit)
                    pieces.append(trial.k - 1)

                self._remerge_pieces(trial, pieces, path, module_a)
                if icvi_service.is_better(state, trial.value, best_value):
                    best_value, best_path = trial.value, path

            if best_path is None:
                return applied
            for edit in best_path:
                self.apply(network, edit)
            applied += 1

    def split_partial_decomposition(self, network: TopoArtmapNetwork) -> int:
        state, module_a = network.icvi, network.module_a
        best_value: Optional[float] = None
        best_path: Optional[List[Edit]] = None

        for c in range(state.k):
            members = self._members(state, c)
            if len(members) < 2:
                continue

            new_cluster = state.k
            seed, seed_value = None, None
            for p in members:
                value = icvi_service.preview(state, [MoveEdit(int(p), new_cluster)], module_a)
                if seed is None or icvi_service.is_better(state, value, seed_value):
                    seed, seed_value = int(p), value

            trial = state.clone()
            path: List[Edit] = [MoveEdit(category=seed, target=new_cluster)]
            icvi_service.restructure(trial, path[0], module_a)

            while True:
                move_value, move = trial.value, None
                for q in members:
                    if q == seed:
                        continue
                    here = int(trial.proto_labels[q])
                    if here == c and np.count_nonzero(trial.proto_labels == c) == 1:
                        continue
                    edit = MoveEdit(category=int(q), target=new_cluster if here == c else c)
                    value = icvi_service.preview(trial, [edit], module_a)
                    if icvi_service.is_better(trial, value, move_value):
                        move_value, move = value, edit
                if move is None:
                    break
                icvi_service.restructure(trial, move, module_a)
                path.append(move)

            if best_path is None or icvi_service.is_better(state, trial.value, best_value):
                best_value, best_path = trial.value, path

        if best_path is None:
            return 0
        for edit in best_path:
            self.apply(network, edit)
        return 1

    # ---- compress ---------------------------------------------------------

    def _train_compressor(
        self,
        network: TopoArtmapNetwork,
        hot: np.ndarray,
        frozen: np.ndarray,
        labels: np.ndarray,
    ) -> Tuple[List[np.ndarray], List[int], dict]:
        config, categories = network.config, network.module_a.categories
        d = categories[0].d

        inner_w = [categories[i].w.copy() for i in frozen]
        inner_labels = [int(labels[i]) for i in frozen]
        n_frozen = len(frozen)
        assignment = {}

        for epoch in range(config.compress_max_epochs):
            changed = False
            for i in hot:
                x = categories[i].w
                label = int(labels[i])
                weights = np.vstack(inner_w) if inner_w else np.zeros((0, 2 * d))
                activations = art_service.activations(x, weights, config.alpha)

                rho, chosen = config.rho_c, None
                for j in art_service.rank(activations):
                    j = int(j)
                    if j < n_frozen:
                        continue
                    m = float(np.minimum(x, inner_w[j]).sum() / d)
                    if m < rho:
                        continue
                    if inner_labels[j] != label:
                        rho = min(m + config.epsilon, 1.0)
                        continue
                    chosen = j
                    break

                if chosen is None:
                    inner_w.append(x.copy())
                    inner_labels.append(label)
                    chosen = len(inner_w) - 1
                    changed = True
                else:
                    h = inner_w[chosen]
                    learned = (1.0 - config.beta_1) * h + config.beta_1 * np.minimum(x, h)
                    if not np.array_equal(learned, h):
                        inner_w[chosen] = learned
                        changed = True
                assignment[int(i)] = chosen

            if not changed:
                logger.debug(f"Compression network converged after {epoch + 1} epochs")
                return inner_w, inner_labels, assignment

        raise CompressionNotConvergedError(
            f"Compression did not converge within {config.compress_max_epochs} epochs"
        )

    def compress(self, network: TopoArtmapNetwork) -> bool:
        module_a, config = network.module_a, network.config
        inactivity = module_a.inactivity
        hot = np.flatnonzero(inactivity >= config.xi)
        if len(hot) == 0:
            return False
        frozen = np.flatnonzero(inactivity < config.xi)
        labels = network.map_field.labels()

        try:
            inner_w, inner_labels, assignment = self._train_compressor(
                network, hot, frozen, labels
            )
        except CompressionNotConvergedError as e:
            logger.warning(f"{e}; keeping the uncompressed model")
            return False

        groups: List[List[int]] = [[int(i)] for i in frozen]
        for j in range(len(frozen), len(inner_w)):
            groups.append([i for i, chosen in assignment.items() if chosen == j])
        kept = [j for j, group in enumerate(groups) if group]

        p_old, p_new = module_a.size, len(kept)
        if p_new >= p_old:
            return False

        membership = np.zeros((p_old, p_new), dtype=np.int64)
        categories: List[Category] = []
        for new_j, j in enumerate(kept):
            group = groups[j]
            membership[group, new_j] = 1
            categories.append(
                Category(
                    w=inner_w[j],
                    stats=reduce(
                        stats_service.merge, [module_a.categories[i].stats for i in group]
                    ),
                    inactivity=min(module_a.categories[i].inactivity for i in group),
                )
            )

        conn = membership.T @ module_a.conn @ membership
        np.fill_diagonal(conn, 0)
        new_labels = np.array([inner_labels[j] for j in kept], dtype=np.int64)
        counts = membership.T @ network.icvi.proto_counts

        module_a.categories = categories
        module_a.conn = conn
        mapfield_service.replace(network.map_field, new_labels, network.map_field.n_clusters)
        icvi_service.resync_prototypes(network.icvi, conn, new_labels, counts)

        if network.history is not None:
            old_to_new = membership.argmax(axis=1)
            network.history.categories = [
                int(old_to_new[j]) for j in network.history.categories
            ]

        logger.debug(f"Compressed module A from {p_old} to {p_new} categories")
        return True

    # ---- prune-and-reassign -----------------------------------------------

    def prune_and_reassign(self, network: TopoArtmapNetwork) -> int:
        state, module_a, config = network.icvi, network.module_a, network.config
        inactivity = module_a.inactivity
        pruned = [
            i
            for i in range(module_a.size)
            if inactivity[i] >= config.xi and state.n[state.proto_labels[i]] < config.phi
        ]
        if not 0 < len(pruned) < module_a.size:
            return 0

        pruned_set = set(pruned)
        survivors = np.array([j for j in range(module_a.size) if j not in pruned_set])
        weights = module_a.weights
        moves = 0
        for i in pruned:
            activations = art_service.activations(
                weights[i], weights[survivors], config.alpha
            )
            nearest = int(survivors[int(np.argmax(activations))])
            target = int(state.proto_labels[nearest])
            if int(state.proto_labels[i]) != target:
                self.apply(network, MoveEdit(category=i, target=target))
                moves += 1

        if moves:
            logger.debug(f"Prune-and-reassign relabeled {moves} categories")
        return moves


postproc_service = PostprocService()
