"""Reading and writing systems as Matrix Market files plus a JSON manifest.

Layout of a manifest (paths are relative to the manifest's directory)::

    {
      "version": 1,
      "spaces": {"P": {"dim": 2, "gram_path": "gram_P.mtx"}, "Q": ..., "U": ..., "V": ...},
      "forms": {"a_path": "a.mtx", "b_path": "b.mtx", "d_path": "d.mtx"},
      "load": {"gq_path": "gq.mtx", "gv_path": "gv.mtx"},                      # optional
      "pair": {"fine_manifest_path": "../fine/manifest.json",                  # optional
               "embeddings": {"P": "E_P.mtx", "Q": ..., "U": ..., "V": ...}},
      "tolerances": {"rank_tol": 1e-10, "check_tol": 1e-12},                  # optional
      "generator": {...}                                                       # optional, informational
    }

Form matrices follow the library convention ``form(x, y) = y @ M @ x``, so
``a`` is ``dim Q x dim P``, ``b`` is ``dim Q x dim U``, ``d`` is ``dim V x dim P``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .bounds import ConformingPair
from .errors import ManifestError, SaddleCertError
from .saddle import LoadFunctional, SaddleSystem

MANIFEST_VERSION = 1
SPACES = ("P", "Q", "U", "V")


def read_mtx(path) -> np.ndarray:
    """Dense 2-D array from a Matrix Market file (array or coordinate, general or symmetric)."""
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"matrix file not found: {path}")
    try:
        m = scipy.io.mmread(path)
    except Exception as exc:  # scipy raises a variety of types on malformed input
        raise ManifestError(f"cannot parse Matrix Market file {path}: {exc}") from exc
    if scipy.sparse.issparse(m):
        m = m.toarray()
    m = np.asarray(m)
    if np.iscomplexobj(m):
        raise ManifestError(f"{path}: only real matrices are supported")
    m = np.asarray(m, dtype=float)
    if m.ndim != 2:
        raise ManifestError(f"{path}: expected a matrix, got shape {m.shape}")
    return m


def write_mtx(path, mat) -> None:
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    scipy.io.mmwrite(str(path), mat, precision=17)


def write_vector(path, vec) -> None:
    write_mtx(path, np.asarray(vec, dtype=float).reshape(-1, 1))


def read_vector(path) -> np.ndarray:
    m = read_mtx(path)
    if 1 not in m.shape:
        raise ManifestError(f"{path}: expected a vector, got shape {m.shape}")
    return m.ravel()


@dataclass
class Manifest:
    path: Path
    data: dict
    system: SaddleSystem
    load: LoadFunctional | None = None
    rank_tol: float | None = None
    check_tol: float | None = None
    embeddings: dict = field(default_factory=dict)
    fine_manifest_path: Path | None = None


def _get(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ManifestError(f"manifest is missing '{where}{key}'")
    return d[key]


def load_manifest(path) -> Manifest:
    """Parse a manifest and everything it references.  Raises :class:`ManifestError`."""
    path = Path(path)
    if not path.is_file():
        raise ManifestError(f"manifest not found: {path}")
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ManifestError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ManifestError(f"{path}: top level must be a JSON object")
    version = _get(data, "version", "")
    if version != MANIFEST_VERSION:
        raise ManifestError(f"{path}: unsupported manifest version {version!r}")
    base = path.parent

    spaces = _get(data, "spaces", "")
    grams = {}
    for name in SPACES:
        entry = _get(spaces, name, "spaces.")
        dim = _get(entry, "dim", f"spaces.{name}.")
        gram = read_mtx(base / _get(entry, "gram_path", f"spaces.{name}."))
        if not isinstance(dim, int) or gram.shape != (dim, dim):
            raise ManifestError(f"{path}: space {name} declares dim {dim!r} but its gram has shape {gram.shape}")
        grams[name] = gram

    forms = _get(data, "forms", "")
    mats = {}
    for name, (rows, cols) in {"a": ("Q", "P"), "b": ("Q", "U"), "d": ("V", "P")}.items():
        m = read_mtx(base / _get(forms, f"{name}_path", "forms."))
        want = (grams[rows].shape[0], grams[cols].shape[0])
        if m.shape != want:
            raise ManifestError(f"{path}: form {name} has shape {m.shape}, expected {want} ({rows} x {cols})")
        mats[name] = m

    try:
        system = SaddleSystem.from_matrices(
            grams["P"], grams["Q"], grams["U"], grams["V"], mats["a"], mats["b"], mats["d"]
        )
    except SaddleCertError as exc:
        raise ManifestError(f"{path}: {exc}") from exc
    except ValueError as exc:
        raise ManifestError(f"{path}: {exc}") from exc

    load = None
    if data.get("load") is not None:
        ld = data["load"]
        g_q = read_vector(base / _get(ld, "gq_path", "load."))
        g_v = read_vector(base / _get(ld, "gv_path", "load."))
        load = LoadFunctional(g_q, g_v)
        try:
            load.check(system)
        except SaddleCertError as exc:
            raise ManifestError(f"{path}: {exc}") from exc

    m = Manifest(path=path, data=data, system=system, load=load)
    tol = data.get("tolerances") or {}
    m.rank_tol = tol.get("rank_tol")
    m.check_tol = tol.get("check_tol")

    if data.get("pair") is not None:
        pair = data["pair"]
        fine_rel = pair.get("fine_manifest_path")
        m.fine_manifest_path = (base / fine_rel) if fine_rel else None
        emb = _get(pair, "embeddings", "pair.")
        m.embeddings = {name: read_mtx(base / _get(emb, name, "pair.embeddings.")) for name in SPACES}
    return m


def load_pair(coarse: Manifest, fine: Manifest) -> ConformingPair:
    if not coarse.embeddings:
        raise ManifestError(f"{coarse.path}: no 'pair' section with embeddings")
    e = coarse.embeddings
    try:
        return ConformingPair(fine.system, coarse.system, e["P"], e["Q"], e["U"], e["V"])
    except SaddleCertError as exc:
        raise ManifestError(str(exc)) from exc


def write_system(
    out_dir,
    sys: SaddleSystem,
    load: LoadFunctional | None = None,
    extra: dict | None = None,
    embeddings: dict | None = None,
    fine_manifest_path: str | None = None,
) -> Path:
    """Write ``sys`` (and optional load / pair data) as ``out_dir/manifest.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spaces = {}
    for name in SPACES:
        space = getattr(sys, name)
        write_mtx(out / f"gram_{name}.mtx", space.gram)
        spaces[name] = {"dim": space.dim, "gram_path": f"gram_{name}.mtx"}
    forms = {}
    for name in ("a", "b", "d"):
        write_mtx(out / f"{name}.mtx", getattr(sys, name).mat)
        forms[f"{name}_path"] = f"{name}.mtx"
    data = {"version": MANIFEST_VERSION, "spaces": spaces, "forms": forms}
    if load is not None:
        write_vector(out / "gq.mtx", load.g_q)
        write_vector(out / "gv.mtx", load.g_v)
        data["load"] = {"gq_path": "gq.mtx", "gv_path": "gv.mtx"}
    if embeddings is not None:
        emb = {}
        for name in SPACES:
            write_mtx(out / f"E_{name}.mtx", embeddings[name])
            emb[name] = f"E_{name}.mtx"
        data["pair"] = {"fine_manifest_path": fine_manifest_path, "embeddings": emb}
    if extra:
        data.update(extra)
    path = out / "manifest.json"
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def write_pair(out_dir, pair: ConformingPair, fine_load: LoadFunctional | None = None, extra: dict | None = None):
    """Write ``out_dir/fine`` and ``out_dir/coarse``; the coarse manifest points at the fine one."""
    out = Path(out_dir)
    fine_path = write_system(out / "fine", pair.fine, fine_load, extra)
    coarse_load = pair.restrict_load(fine_load) if fine_load is not None else None
    embeddings = {"P": pair.E_P, "Q": pair.E_Q, "U": pair.E_U, "V": pair.E_V}
    coarse_path = write_system(
        out / "coarse", pair.coarse, coarse_load, extra, embeddings, "../fine/manifest.json"
    )
    return coarse_path, fine_path
