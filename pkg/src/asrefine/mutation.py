"""First-order mutation operators over model ASTs.

Three operators are supported:

- ``guard_true``: replace a guard (action guard or branch guard) by ``true``
- ``comp_invert``: swap ``#=`` and ``#\\=``
- ``int_inc``: replace an integer constant ``c`` by ``c + 1``, or by the
  lower bound of the relevant type when ``c`` is its upper bound

Mutants are enumerated operator by operator, in document order within each
operator, and numbered from 1; the unchanged original is mutant 0.
"""

import json
import logging
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional

from .common import MANIFEST_NAME, MODEL_SUFFIX, read_text_file, write_text_file
from .exceptions import InvalidLocation
from .model import (
    Action,
    Assign,
    BoolConst,
    Compare,
    CompareOp,
    Const,
    Guarded,
    Model,
    Node,
    Path as NodePath,
    TypeDef,
    VarRef,
    children,
    format_guard,
    node_at,
    parent_of,
    pretty_print,
    replace_at,
    walk,
)
from .types import SCHEMA_VERSION, Manifest, ManifestEntry, MutantSpecDict, OperatorName

logger = logging.getLogger(__name__)


class MutationOperator(str, Enum):
    """Mutation operators, valued by their command-line name."""

    GUARD_TRUE = "guard_true"
    COMP_INVERT = "comp_invert"
    INT_INC = "int_inc"

    @classmethod
    def parse(cls, names: Iterable[str]) -> list["MutationOperator"]:
        """
        Resolve command-line names, keeping the canonical operator order.

        Raises:
            ValueError: If a name is unknown
        """
        wanted = set()
        for name in names:
            try:
                wanted.add(cls(name))
            except ValueError:
                valid = ", ".join(op.value for op in cls)
                raise ValueError(f"unknown mutation operator '{name}' (valid: {valid})") from None
        return [op for op in cls if op in wanted]


ALL_OPERATORS: tuple[MutationOperator, ...] = tuple(MutationOperator)


@dataclass(frozen=True)
class MutantSpec:
    """Where and how a mutant differs from its original."""

    operator: MutationOperator
    path: NodePath
    original: str
    replacement: str

    def describe(self) -> str:
        return f"{self.operator.value} at {list(self.path)}: {self.original} -> {self.replacement}"

    def to_dict(self) -> MutantSpecDict:
        return {
            "operator": self.operator.value,  # type: ignore[typeddict-item]
            "path": list(self.path),
            "original": self.original,
            "replacement": self.replacement,
        }

    @classmethod
    def from_dict(cls, data: MutantSpecDict) -> "MutantSpec":
        return cls(
            MutationOperator(data["operator"]),
            tuple(int(i) for i in data["path"]),
            str(data["original"]),
            str(data["replacement"]),
        )


@dataclass(frozen=True)
class Mutant:
    """A numbered model variant; ``spec`` is None for the original (id 0)."""

    id: int
    spec: Optional[MutantSpec]
    model: Model
    file: Optional[str] = None


# =============================================================================
# SITES
# =============================================================================


def _is_guard_site(model: Model, path: NodePath) -> bool:
    if not path or path[-1] != 0:
        return False
    return isinstance(parent_of(model, path), (Action, Guarded))


def _first_var(node: Node) -> Optional[VarRef]:
    for _, sub in walk(node):
        if isinstance(sub, VarRef):
            return sub
    return None


def _var_ref_type(model: Model, action: Action, ref: VarRef) -> TypeDef:
    if ref.name in model.state_def:
        return model.var_type(ref.name)
    return model.param_type(action, ref.name)


def context_type(model: Model, path: NodePath) -> TypeDef:
    """Type bounding the constant at ``path``.

    The nearest enclosing assignment gives its target's type; the nearest
    comparison gives the type of the first variable on the other side, or
    on the constant's own side; otherwise the widest declared type.
    """
    action = node_at(model, path[:1])
    assert isinstance(action, Action)
    for depth in range(len(path) - 1, 0, -1):
        ancestor = node_at(model, path[:depth])
        if isinstance(ancestor, Assign):
            return model.var_type(ancestor.target)
        if isinstance(ancestor, Compare):
            own_side = path[depth]
            sides = children(ancestor)
            ref = _first_var(sides[1 - own_side]) or _first_var(sides[own_side])
            if ref is not None:
                return _var_ref_type(model, action, ref)
            break
    return model.widest_type()


def _increment(value: int, t: TypeDef) -> int:
    return t.lo if value == t.hi else value + 1


def _sites(model: Model, operator: MutationOperator) -> list[MutantSpec]:
    specs: list[MutantSpec] = []
    for path, node in walk(model):
        if operator is MutationOperator.GUARD_TRUE:
            if _is_guard_site(model, path) and node != BoolConst(True):
                specs.append(MutantSpec(operator, path, format_guard(node), "true"))  # type: ignore[arg-type]
        elif operator is MutationOperator.COMP_INVERT:
            if isinstance(node, Compare) and node.op in (CompareOp.EQ, CompareOp.NE):
                flipped = CompareOp.NE if node.op is CompareOp.EQ else CompareOp.EQ
                specs.append(MutantSpec(operator, path, node.op.value, flipped.value))
        elif isinstance(node, Const):
            new = _increment(node.value, context_type(model, path))
            specs.append(MutantSpec(operator, path, str(node.value), str(new)))
    return specs


# =============================================================================
# OPERATIONS
# =============================================================================


def apply_mutant(model: Model, spec: MutantSpec) -> Model:
    """
    Return a copy of ``model`` with the node at ``spec.path`` mutated.

    Raises:
        InvalidLocation: If the path does not resolve to a node the operator applies to,
                         or the node no longer carries ``spec.original``
    """
    node = node_at(model, spec.path)
    new: Node
    if spec.operator is MutationOperator.GUARD_TRUE:
        if not _is_guard_site(model, spec.path):
            raise InvalidLocation(f"{list(spec.path)} is not a guard")
        new = BoolConst(True, getattr(node, "loc", None))
    elif spec.operator is MutationOperator.COMP_INVERT:
        if not isinstance(node, Compare) or node.op.value != spec.original:
            raise InvalidLocation(f"{list(spec.path)} is not a '{spec.original}' comparison")
        new = Compare(CompareOp(spec.replacement), node.left, node.right, node.loc)
    else:
        if not isinstance(node, Const) or str(node.value) != spec.original:
            raise InvalidLocation(f"{list(spec.path)} is not the constant {spec.original}")
        new = Const(int(spec.replacement), node.loc)
    return replace_at(model, spec.path, new)


def enumerate_mutants(
    model: Model, operators: Sequence[MutationOperator] = ALL_OPERATORS
) -> list[Mutant]:
    """One mutant per applicable site per operator, numbered from 1."""
    mutants: list[Mutant] = []
    for operator in ALL_OPERATORS:
        if operator not in operators:
            continue
        sites = _sites(model, operator)
        logger.debug(f"{operator.value}: {len(sites)} site(s)")
        for spec in sites:
            mutants.append(Mutant(len(mutants) + 1, spec, apply_mutant(model, spec)))
    return mutants


def mutant_campaign(
    model: Model, operators: Sequence[MutationOperator] = ALL_OPERATORS
) -> list[Mutant]:
    """The original as mutant 0 followed by every generated mutant."""
    return [Mutant(0, None, model)] + enumerate_mutants(model, operators)


def site_counts(model: Model) -> dict[str, int]:
    """Number of sites per operator name."""
    return {op.value: len(_sites(model, op)) for op in ALL_OPERATORS}


# =============================================================================
# FILES
# =============================================================================


def mutant_filename(stem: str, mutant_id: int) -> str:
    return f"{stem}.mut{mutant_id:03d}{MODEL_SUFFIX}"


def write_mutants(
    mutants: Sequence[Mutant],
    out_dir: Path,
    stem: str,
    original: str = "",
    operators: Sequence[MutationOperator] = ALL_OPERATORS,
) -> Path:
    """
    Write each mutant as ``<stem>.mutNNN.as`` plus ``manifest.json``.

    The unchanged original (id 0) is not written.

    Returns:
        Path of the manifest

    Raises:
        OSError: If a file cannot be written
    """
    entries: list[ManifestEntry] = []
    for mutant in mutants:
        if mutant.spec is None:
            continue
        name = mutant_filename(stem, mutant.id)
        write_text_file(out_dir / name, pretty_print(mutant.model))
        entries.append({"id": mutant.id, "file": name, "spec": mutant.spec.to_dict()})

    manifest: Manifest = {
        "schema_version": SCHEMA_VERSION,
        "original": original,
        "operators": [op.value for op in operators],  # type: ignore[misc]
        "mutants": entries,
    }
    manifest_path = out_dir / MANIFEST_NAME
    write_text_file(manifest_path, json.dumps(manifest, indent=2) + "\n")
    logger.info(f"Wrote {len(entries)} mutant(s) to {out_dir}")
    return manifest_path


def load_manifest(path: Path) -> Manifest:
    """
    Read a manifest written by ``write_mutants``.

    Raises:
        OSError: If the file cannot be read
        ValueError: If it is not a manifest
    """
    data = json.loads(read_text_file(path))
    if not isinstance(data, dict) or not isinstance(data.get("mutants"), list):
        raise ValueError(f"{path} is not a mutant manifest")
    return data  # type: ignore[return-value]


_MUTANT_ID = re.compile(r"\.mut(\d+)\.as$")


def list_mutant_files(directory: Path) -> list[tuple[int, Path, Optional[MutantSpec]]]:
    """
    Mutant files in ``directory`` ordered by id.

    Uses ``manifest.json`` when present; otherwise every ``*.as`` file,
    numbered from its ``.mutNNN`` suffix or by sorted position.
    """
    manifest_path = directory / MANIFEST_NAME
    if manifest_path.exists():
        manifest = load_manifest(manifest_path)
        listed = [
            (int(e["id"]), directory / e["file"], MutantSpec.from_dict(e["spec"]))
            for e in manifest["mutants"]
        ]
        return sorted(listed, key=lambda item: item[0])

    found: list[tuple[int, Path, Optional[MutantSpec]]] = []
    for position, path in enumerate(sorted(directory.glob(f"*{MODEL_SUFFIX}")), 1):
        match = _MUTANT_ID.search(path.name)
        found.append((int(match.group(1)) if match else position, path, None))
    return sorted(found, key=lambda item: (item[0], item[1].name))


def operator_names(operators: Sequence[MutationOperator]) -> list[OperatorName]:
    return [op.value for op in operators]  # type: ignore[misc]
