#
# Files of instances and reports
#
# Copyright (C) 2026  The lencert authors.  All rights reserved.
#
# This library is free software; you can redistribute it and/or
# modify it under the terms of the GNU Lesser General Public
# License as published by the Free Software Foundation; either
# version 2.1 of the License, or (at your option) any later version.
#
# This library is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# Lesser General Public License for more details.
#
# You should have received a copy of the GNU Lesser General Public
# License along with this library; if not, write to the Free Software
# Foundation, Inc., 51 Franklin Street, Fifth Floor, Boston, MA  02110-1301
# USA
#
import csv
import hashlib
import json
import logging
import os

import numpy as np

from lencert import __version__
from lencert.constants import REPORT_SCHEMA_VERSION, ENDPOINT_GAMMA0, \
    ENDPOINT_GAMMA1
from lencert.error import LencertError
from lencert.geometry import AnnulusSurface, CurveError, DiscreteCurve, \
    MeshError, TriMesh
from lencert.identifier import IdentifierError
from lencert.typing import get_native
from lencert.verify.generator import Instance

__all__ = [
    "InstanceFormatError",
    "CURVE0_FILE",
    "CURVE1_FILE",
    "MESH_FILE",
    "MANIFEST_FILE",
    "dump_json",
    "load_json",
    "canonical_json",
    "config_hash",
    "file_hash",
    "write_curve",
    "read_curve",
    "write_obj",
    "read_obj",
    "write_instance",
    "read_instance",
    "report_envelope",
    "write_report",
    "write_csv",
]

log = logging.getLogger(__name__)

CURVE0_FILE = "curve0.json"
CURVE1_FILE = "curve1.json"
MESH_FILE = "sigma.obj"
MANIFEST_FILE = "manifest.json"


class InstanceFormatError(LencertError):
    """The file of an instance cannot be parsed."""
    pass


def canonical_json(data):
    """Return the canonical JSON text of the data."""
    return json.dumps(
        get_native(data), sort_keys=True, separators=(",", ":")
    )


def config_hash(config):
    """Return the SHA-256 digest of the canonical configuration."""
    return hashlib.sha256(canonical_json(config).encode("utf-8")).hexdigest()


def dump_json(path, data):
    """Write the data to a JSON file with sorted keys."""
    with open(path, "w") as f:
        json.dump(get_native(data), f, sort_keys=True, indent=2)
        f.write("\n")


def load_json(path):
    """Read a JSON file.

    :raise InstanceFormatError: if the file is not valid JSON
    """
    with open(path) as f:
        try:
            return json.load(f)
        except ValueError as e:
            raise InstanceFormatError(
                "Invalid JSON in '{}': {}".format(path, e)
            ) from None


def file_hash(path):
    """Return the SHA-256 digest of a file."""
    digest = hashlib.sha256()

    with open(path, "rb") as f:
        for block in iter(lambda: f.read(65536), b""):
            digest.update(block)

    return digest.hexdigest()


def write_curve(path, curve):
    """Write a curve to a JSON file."""
    dump_json(path, {
        "closed": curve.closed,
        "points": curve.points,
    })


def read_curve(path):
    """Read a curve from a JSON file.

    :param path: a path to the file
    :return: an instance of DiscreteCurve
    :raise InstanceFormatError: if the file is not valid
    """
    data = load_json(path)

    if not isinstance(data, dict) or set(data) != {"closed", "points"}:
        raise InstanceFormatError(
            "Invalid curve in '{}'.".format(path)
        )

    try:
        return DiscreteCurve(data["points"], bool(data["closed"]))
    except CurveError as e:
        raise InstanceFormatError(
            "Invalid curve in '{}': {}".format(path, e)
        ) from None


def write_obj(path, mesh, comment=None):
    """Write a triangle mesh to an ASCII OBJ file."""
    with open(path, "w") as f:
        if comment:
            f.write("# {}\n".format(comment))

        for x, y, z in mesh.vertices.tolist():
            f.write("v {} {} {}\n".format(repr(x), repr(y), repr(z)))

        for a, b, c in (mesh.triangles + 1).tolist():
            f.write("f {} {} {}\n".format(a, b, c))


def _parse_record(values, parse, count, path, number):
    """Parse the values of one OBJ record."""
    if len(values) != count:
        raise InstanceFormatError(
            "Expected {} values on line {} of '{}'.".format(
                count, number, path
            )
        )

    try:
        return [parse(value) for value in values]
    except ValueError:
        raise InstanceFormatError(
            "Invalid value on line {} of '{}'.".format(number, path)
        ) from None


def read_obj(path):
    """Read a triangle mesh from an ASCII OBJ file.

    Only vertex and triangle records are accepted. Anything else is
    an error.

    :param path: a path to the file
    :return: an instance of TriMesh
    :raise InstanceFormatError: if the file is not valid
    """
    vertices = []
    faces = []

    with open(path) as f:
        for number, line in enumerate(f, start=1):
            fields = line.split()

            if not fields or fields[0].startswith("#"):
                continue

            if fields[0] == "v":
                vertices.append(
                    _parse_record(fields[1:], float, 3, path, number)
                )
            elif fields[0] == "f":
                faces.append(
                    _parse_record(fields[1:], int, 3, path, number)
                )
            else:
                raise InstanceFormatError(
                    "Unsupported record '{}' on line {} of '{}'.".format(
                        fields[0], number, path
                    )
                )

    if not vertices or not faces:
        raise InstanceFormatError("No triangles in '{}'.".format(path))

    try:
        return TriMesh(
            np.array(vertices, dtype=float),
            np.array(faces, dtype=np.int64) - 1
        )
    except MeshError as e:
        raise InstanceFormatError(
            "Invalid mesh in '{}': {}".format(path, e)
        ) from None


def write_instance(instance, directory, config=None):
    """Write the files of an instance and its manifest.

    :param instance: an instance
    :param directory: an output directory
    :param config: a structure of the run configuration or None
    :return: a path to the manifest
    """
    os.makedirs(directory, exist_ok=True)
    paths = {
        "curve0": os.path.join(directory, CURVE0_FILE),
        "curve1": os.path.join(directory, CURVE1_FILE),
        "sigma": os.path.join(directory, MESH_FILE),
    }

    write_curve(paths["curve0"], instance.curve0)
    write_curve(paths["curve1"], instance.curve1)
    write_obj(paths["sigma"], instance.sigma.mesh, "lencert {}".format(
        __version__
    ))

    manifest = {
        "schema": REPORT_SCHEMA_VERSION,
        "version": __version__,
        "eps": instance.eps,
        "backend": str(instance.backend),
        "labels": list(instance.sigma.labels),
        "provenance": instance.provenance,
        "files": {
            name: {
                "path": os.path.basename(path),
                "sha256": file_hash(path),
            }
            for name, path in paths.items()
        },
    }

    if config is not None:
        manifest["config"] = config
        manifest["config_hash"] = config_hash(config)

    path = os.path.join(directory, MANIFEST_FILE)
    dump_json(path, manifest)
    log.info("Wrote the instance to %s.", directory)
    return path


def read_instance(path):
    """Read an instance from its manifest.

    :param path: a path to the manifest or its directory
    :return: an instance of Instance
    :raise InstanceFormatError: if a file is not valid
    """
    if os.path.isdir(path):
        path = os.path.join(path, MANIFEST_FILE)

    directory = os.path.dirname(path)
    manifest = load_json(path)

    try:
        files = {
            name: os.path.join(directory, manifest["files"][name]["path"])
            for name in ("curve0", "curve1", "sigma")
        }
        expected = {
            name: manifest["files"][name]["sha256"] for name in files
        }
        eps = float(manifest["eps"])
        provenance = manifest["provenance"]
    except (KeyError, TypeError, ValueError) as e:
        raise InstanceFormatError(
            "Invalid manifest '{}': {}".format(path, e)
        ) from None

    if not isinstance(provenance, dict):
        raise InstanceFormatError(
            "Invalid manifest '{}': the provenance is not an object.".format(
                path
            )
        )

    for name, file_path in files.items():
        if file_hash(file_path) != expected[name]:
            raise InstanceFormatError(
                "The hash of '{}' doesn't match.".format(file_path)
            )

    mesh = read_obj(files["sigma"])

    try:
        sigma = AnnulusSurface(
            mesh, manifest.get("labels", (ENDPOINT_GAMMA0, ENDPOINT_GAMMA1))
        )
        return Instance(
            read_curve(files["curve0"]),
            read_curve(files["curve1"]),
            sigma,
            eps,
            manifest.get("backend", "euclidean"),
            provenance.get("generator", ""),
            provenance.get("seed", 0),
            provenance.get("parameters", {})
        )
    except (MeshError, IdentifierError) as e:
        raise InstanceFormatError(
            "Invalid instance '{}': {}".format(path, e)
        ) from None


def report_envelope(config, report):
    """Wrap a report with its configuration and the library version.

    :param config: a structure of the run configuration
    :param report: a structure of the report
    :return: a dictionary
    """
    return {
        "schema": REPORT_SCHEMA_VERSION,
        "version": __version__,
        "config": config,
        "config_hash": config_hash(config),
        "report": report,
    }


def write_report(path, config, report):
    """Write a report in the envelope to a JSON file."""
    dump_json(path, report_envelope(config, report))
    log.info("Wrote the report to %s.", path)


def write_csv(path, header, rows, config=None):
    """Write plot data to a CSV file.

    The first line is a comment with the version and the config hash.
    """
    with open(path, "w", newline="") as f:
        if config is not None:
            f.write("# lencert {} config {}\n".format(
                __version__, config_hash(config)
            ))

        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)

        for row in rows:
            writer.writerow([get_native(value) for value in row])
