"""Point cloud file ingest and emit: XYZ text and ASCII PLY."""

import numpy as np

from .core import PointCloud

FORMATS = ("xyz", "ply-ascii")


class CloudIOError(ValueError):
    pass


def _finalize(points, normals, path):
    points = np.asarray(points, dtype=np.float64)
    if normals is not None:
        normals = np.asarray(normals, dtype=np.float64)
        norms = np.linalg.norm(normals, axis=1)
        bad = np.flatnonzero(norms < 1e-12)
        if len(bad):
            raise CloudIOError(f"{path}: zero normal at point {bad[0]}")
        normals = normals / norms[:, None]
    return PointCloud(points, normals)


def _read_xyz(path):
    points, normals = [], []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = stripped.split()
            if len(fields) not in (3, 6):
                raise CloudIOError(f"{path}:{lineno}: expected 3 or 6 fields")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise CloudIOError(f"{path}:{lineno}: mixed 3- and 6-field lines")
            try:
                values = [float(f) for f in fields]
            except ValueError:
                raise CloudIOError(f"{path}:{lineno}: malformed number") from None
            points.append(values[:3])
            if width == 6:
                normals.append(values[3:])
    if not points:
        raise CloudIOError(f"{path}: empty cloud")
    return _finalize(points, normals if normals else None, path)


def _read_ply_ascii(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "ply":
        raise CloudIOError(f"{path}: not a PLY file")
    vertex_count = None
    properties = []
    in_vertex_element = False
    body_start = None
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.strip().split()
        if not fields:
            continue
        if fields[0] == "format":
            if fields[1] != "ascii":
                raise CloudIOError(f"{path}:{lineno}: only ascii PLY supported")
        elif fields[0] == "element":
            in_vertex_element = fields[1] == "vertex"
            if in_vertex_element:
                vertex_count = int(fields[2])
        elif fields[0] == "property" and in_vertex_element:
            properties.append(fields[-1])
        elif fields[0] == "end_header":
            body_start = lineno
            break
    if vertex_count is None or body_start is None:
        raise CloudIOError(f"{path}: missing vertex element or end_header")
    try:
        cols = {name: properties.index(name) for name in ("x", "y", "z")}
    except ValueError:
        raise CloudIOError(f"{path}: vertex element lacks x/y/z") from None
    has_normals = all(n in properties for n in ("nx", "ny", "nz"))

    body = lines[body_start : body_start + vertex_count]
    if len(body) < vertex_count:
        raise CloudIOError(f"{path}: truncated vertex data")
    points, normals = [], [] if has_normals else None
    for offset, line in enumerate(body):
        lineno = body_start + 1 + offset
        fields = line.strip().split()
        if len(fields) < len(properties):
            raise CloudIOError(f"{path}:{lineno}: malformed vertex line")
        try:
            values = [float(f) for f in fields]
        except ValueError:
            raise CloudIOError(f"{path}:{lineno}: malformed number") from None
        points.append([values[cols["x"]], values[cols["y"]], values[cols["z"]]])
        if has_normals:
            normals.append(
                [
                    values[properties.index("nx")],
                    values[properties.index("ny")],
                    values[properties.index("nz")],
                ]
            )
    if not points:
        raise CloudIOError(f"{path}: empty cloud")
    return _finalize(points, normals, path)


def read_cloud(path, format="xyz"):
    if format == "xyz":
        return _read_xyz(path)
    if format == "ply-ascii":
        return _read_ply_ascii(path)
    raise CloudIOError(f"unknown format: {format!r}")


def _fmt(value):
    return f"{value:.9g}"


def write_cloud(cloud, path, format="xyz"):
    """Emit a cloud in the same dialect read_cloud accepts; 9 significant
    digits, deterministic byte output."""
    if len(cloud) == 0:
        raise CloudIOError("empty cloud")
    if format not in FORMATS:
        raise CloudIOError(f"unknown format: {format!r}")
    rows = []
    if cloud.normals is not None:
        for p, n in zip(cloud.points, cloud.normals):
            rows.append(" ".join(_fmt(v) for v in (*p, *n)))
    else:
        for p in cloud.points:
            rows.append(" ".join(_fmt(v) for v in p))
    with open(path, "w", newline="\n") as fh:
        if format == "ply-ascii":
            fh.write("ply\nformat ascii 1.0\n")
            fh.write(f"element vertex {len(cloud)}\n")
            fh.write("property float x\nproperty float y\nproperty float z\n")
            if cloud.normals is not None:
                fh.write("property float nx\nproperty float ny\nproperty float nz\n")
            fh.write("end_header\n")
        fh.write("\n".join(rows))
        fh.write("\n")
