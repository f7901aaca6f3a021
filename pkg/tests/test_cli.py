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
import os
import tempfile
import unittest
from contextlib import redirect_stderr
from io import StringIO

from lencert.cli.files import InstanceFormatError, dump_json, file_hash, \
    load_json, read_instance, read_obj
from lencert.cli.main import create_parser, load_config, main, run
from lencert.constants import C_BUDGET, EXIT_CONFIG_ERROR, EXIT_IO_ERROR, \
    EXIT_PASS, SAMPLES_PER_WINDOW

GENERATE = [
    "generate", "--family", "offset", "--R", "16", "--delta", "5e-5",
    "--points", "202", "--eps", "0.1", "--seed", "3"
]

FIXTURE = os.path.join(os.path.dirname(__file__), "data", "offset")


class CommandLineTestCase(unittest.TestCase):
    """Test the command line."""

    def setUp(self):
        self._directory = tempfile.TemporaryDirectory()
        self.output = self._directory.name

    def tearDown(self):
        self._directory.cleanup()

    def _path(self, *names):
        return os.path.join(self.output, *names)

    def _main(self, argv):
        """Run the main function and return the exit code."""
        with redirect_stderr(StringIO()):
            with self.assertRaises(SystemExit) as cm:
                main(argv)

        return cm.exception.code

    def _generate(self, name="instance", environ=None):
        code = run(GENERATE + ["--output", self._path(name)], environ or {})
        self.assertEqual(code, EXIT_PASS)
        return self._path(name)

    def test_generate(self):
        """Test the files of a generated instance."""
        directory = self._generate()
        self.assertEqual(sorted(os.listdir(directory)), [
            "curve0.json", "curve1.json", "manifest.json", "sigma.obj"
        ])

        manifest = load_json(os.path.join(directory, "manifest.json"))
        self.assertEqual(manifest["eps"], 0.1)
        self.assertEqual(manifest["backend"], "euclidean")
        self.assertEqual(manifest["provenance"]["seed"], 3)
        self.assertEqual(manifest["provenance"]["generator"], "offset")
        self.assertEqual(manifest["config"]["command"], "generate")
        self.assertNotIn("jobs", manifest["config"])
        self.assertEqual(len(manifest["config_hash"]), 64)

        with open(os.path.join(directory, "sigma.obj")) as f:
            self.assertTrue(f.readline().startswith("# lencert "))

        instance = read_instance(directory)
        self.assertEqual(instance.curve0.size, 202)
        self.assertEqual(instance.seed, 3)
        self.assertEqual(instance.eps, 0.1)

    def test_same_seed(self):
        """Test that the seed determines the files."""
        first = self._generate("first")
        second = self._generate("second")

        for name in ("curve0.json", "curve1.json", "sigma.obj",
                     "manifest.json"):
            self.assertEqual(
                file_hash(os.path.join(first, name)),
                file_hash(os.path.join(second, name))
            )

    def test_rerun(self):
        """Test a run from the embedded configuration."""
        first = self._generate("first")
        code = run([
            "generate",
            "--config", os.path.join(first, "manifest.json"),
            "--output", self._path("second")
        ], {})
        self.assertEqual(code, EXIT_PASS)

        for name in ("curve0.json", "sigma.obj", "manifest.json"):
            self.assertEqual(
                file_hash(os.path.join(first, name)),
                file_hash(self._path("second", name))
            )

    def test_environment_seed(self):
        """Test the seed of the environment."""
        directory = self._generate(environ={"ALL_SEED": "7"})
        manifest = load_json(os.path.join(directory, "manifest.json"))
        self.assertEqual(manifest["provenance"]["seed"], 7)
        self.assertEqual(manifest["config"]["seed"], 7)

    def test_invalid_parameters(self):
        """Test the exit codes of invalid parameters."""
        argv = list(GENERATE)
        argv[argv.index("5e-5")] = "0"
        self.assertEqual(
            self._main(argv + ["--output", self.output]),
            EXIT_CONFIG_ERROR
        )
        self.assertEqual(self._main(["verify", "--unknown"]),
                         EXIT_CONFIG_ERROR)
        self.assertEqual(self._main([
            "sweep", "--family", "offset", "--eps-values", "0.1,0.01",
            "--output", self.output
        ]), EXIT_CONFIG_ERROR)
        self.assertEqual(self._main([
            "verify", "--config", self._path("missing.json")
        ]), EXIT_IO_ERROR)

    def test_corrupted_mesh(self):
        """Test an instance with a modified mesh."""
        directory = self._generate()
        path = os.path.join(directory, "sigma.obj")

        with open(path, "a") as f:
            f.write("f 1 2 3\n")

        with self.assertRaises(InstanceFormatError):
            read_instance(directory)

        self.assertEqual(
            self._main(["check", directory, "--output", self.output]),
            EXIT_IO_ERROR
        )

    def test_read_obj(self):
        """Test the rejected records of a mesh."""
        path = self._path("mesh.obj")

        with open(path, "w") as f:
            f.write("v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf 1 2 3\n")

        with self.assertRaises(InstanceFormatError) as cm:
            read_obj(path)

        self.assertEqual(
            str(cm.exception),
            "Unsupported record 'vn' on line 4 of '{}'.".format(path)
        )

        with open(path, "w") as f:
            f.write("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2\n")

        with self.assertRaises(InstanceFormatError) as cm:
            read_obj(path)

        self.assertEqual(
            str(cm.exception),
            "Expected 3 values on line 4 of '{}'.".format(path)
        )

        with open(path, "w") as f:
            f.write("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n")

        self.assertEqual(len(read_obj(path).triangles), 1)

    def test_verify(self):
        """Test the verification of a generated instance."""
        directory = self._generate()
        code = run([
            "verify", directory, "--window-stride", "25",
            "--samples-per-window", "8", "--output", self._path("report")
        ], {})
        self.assertEqual(code, EXIT_PASS)

        envelope = load_json(self._path("report", "report.json"))
        self.assertEqual(envelope["config"]["command"], "verify")
        self.assertEqual(envelope["config"]["window_stride"], 25)
        self.assertTrue(envelope["report"]["passed"])
        self.assertEqual(len(envelope["report"]["windows"]), 4)

        with open(self._path("report", "lambda.csv")) as f:
            lines = f.read().splitlines()

        self.assertTrue(lines[0].startswith("# lencert "))
        self.assertEqual(
            lines[1], "window_start,window_end,lambda_fraction,coarea_ratio"
        )
        self.assertEqual(len(lines), 6)

    def test_verify_rerun(self):
        """Test a verification from the configuration of its report."""
        directory = self._generate()
        code = self._main([
            "verify", directory, "--window-stride", "25",
            "--samples-per-window", "8", "--output", self._path("first")
        ])
        self.assertEqual(code, EXIT_PASS)

        code = self._main([
            "verify", "--config", self._path("first", "report.json"),
            "--output", self._path("second")
        ])
        self.assertEqual(code, EXIT_PASS)

        first = load_json(self._path("first", "report.json"))
        second = load_json(self._path("second", "report.json"))
        self.assertEqual(first["config"], second["config"])
        self.assertEqual(first["report"]["ratio"], second["report"]["ratio"])

    def test_fixture(self):
        """Test the verification of the shipped instance."""
        instance = read_instance(FIXTURE)
        self.assertEqual(instance.curve0.size, 202)
        self.assertEqual(instance.eps, 0.1)

        code = run([
            "verify", FIXTURE, "--window-stride", "25",
            "--samples-per-window", "8", "--output", self._path("report")
        ], {})
        self.assertEqual(code, EXIT_PASS)

        report = load_json(self._path("report", "report.json"))["report"]
        self.assertTrue(report["passed"])
        self.assertGreater(report["ratio"], 1 - 0.1)
        self.assertEqual(report["failures"], [])

    def test_default_options(self):
        """Test that the missing options keep the defaults."""
        parser = create_parser()

        config = load_config(parser.parse_args(["verify", "instance"]), {})
        self.assertEqual(config.instance, "instance")
        self.assertEqual(config.samples_per_window, SAMPLES_PER_WINDOW)
        self.assertEqual(config.window_stride, 1)
        self.assertEqual(config.c_budget, C_BUDGET)
        self.assertEqual(config.curvature_bound, 0.0)
        self.assertEqual(config.scale, 1.0)
        self.assertEqual(config.eps, 1e-3)

        config = load_config(parser.parse_args(["generate"]), {})
        self.assertEqual(config.radius, 0.0)
        self.assertEqual(config.delta, 0.0)
        self.assertEqual(config.points, 0)

        config = load_config(parser.parse_args(["sweep"]), {})
        self.assertEqual(config.eps_values, [1e-1, 1e-2, 1e-3])

        config = load_config(parser.parse_args(["search"]), {})
        self.assertEqual(config.budget, 100)

        config = load_config(parser.parse_args(
            ["intersect", "instance", "--start", "3"]
        ), {})
        self.assertEqual(config.start, 3.0)
        self.assertEqual(config.length, 1.0)
        self.assertEqual(config.samples_per_window, SAMPLES_PER_WINDOW)

    def test_family_defaults(self):
        """Test the commands with the default sizes."""
        code = run([
            "generate", "--family", "offset", "--eps", "0.1",
            "--output", self._path("instance")
        ], {})
        self.assertEqual(code, EXIT_PASS)

        instance = read_instance(self._path("instance"))
        self.assertEqual(instance.parameters["R"], 20.0)
        self.assertEqual(instance.curve0.size, 252)

        code = run([
            "intersect", self._path("instance"), "--start", "10",
            "--output", self._path("out")
        ], {})
        self.assertEqual(code, EXIT_PASS)
        envelope = load_json(self._path("out", "intersect.json"))
        self.assertEqual(
            len(envelope["report"]["samples"]), SAMPLES_PER_WINDOW
        )

    def test_invalid_provenance(self):
        """Test a manifest with an invalid provenance."""
        directory = self._generate()
        path = os.path.join(directory, "manifest.json")
        manifest = load_json(path)
        manifest["provenance"] = "offset"
        dump_json(path, manifest)

        with self.assertRaises(InstanceFormatError) as cm:
            read_instance(directory)

        self.assertEqual(
            str(cm.exception),
            "Invalid manifest '{}': the provenance is not an object.".format(
                path
            )
        )
        self.assertEqual(
            self._main(["check", directory, "--output", self.output]),
            EXIT_IO_ERROR
        )

    def test_backend(self):
        """Test the dispatch to a curved chart."""
        directory = self._generate()
        code = run([
            "check", directory, "--backend", "sphere:1000",
            "--output", self._path("check")
        ], {})
        self.assertIn(code, (0, 1))

        envelope = load_json(self._path("check", "check.json"))
        self.assertEqual(envelope["config"]["backend"], "sphere:1000")
        self.assertEqual(envelope["report"]["chart"], "sphere:1000.0")

    def test_inspection(self):
        """Test the commands inspecting an instance."""
        directory = self._generate()

        code = run(["smooth", directory, "--output", self._path("out")], {})
        self.assertEqual(code, EXIT_PASS)
        envelope = load_json(self._path("out", "smooth.json"))
        self.assertLessEqual(envelope["report"]["boundary_gap"], 1e-9)
        self.assertTrue(os.path.exists(self._path("out", "smooth.csv")))

        code = run([
            "foliate", directory, "--start", "10", "--length", "1",
            "--output", self._path("out")
        ], {})
        self.assertEqual(code, EXIT_PASS)
        envelope = load_json(self._path("out", "foliate.json"))
        self.assertEqual(
            sorted(envelope["report"]), ["assignment", "chart"]
        )

        code = run([
            "intersect", directory, "--start", "10", "--length", "1",
            "--samples-per-window", "8", "--output", self._path("out")
        ], {})
        self.assertEqual(code, EXIT_PASS)
        envelope = load_json(self._path("out", "intersect.json"))
        self.assertEqual(envelope["report"]["fraction"], 1.0)
        self.assertEqual(len(envelope["report"]["samples"]), 8)

    def test_search(self):
        """Test a short search from the command line."""
        code = run([
            "search", "--budget", "2", "--eps", "0.01", "--seed", "1",
            "--output", self.output
        ], {})
        self.assertEqual(code, EXIT_PASS)

        envelope = load_json(self._path("search.json"))
        self.assertEqual(envelope["report"]["trials"], 2)
        self.assertFalse(envelope["report"]["counterexample"])

        self.assertEqual(
            self._main(["foliate", "--output", self.output]),
            EXIT_CONFIG_ERROR
        )
