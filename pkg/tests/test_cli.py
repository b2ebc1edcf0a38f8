import io
import json
import sys
from fractions import Fraction

import pytest

from padic_loci import crystalline as cr
from padic_loci import disks as dk
from padic_loci import padic as pa
from padic_loci import subsets as ss
from padic_loci.cli import main
from padic_loci.padic import FieldDescriptor

Q5 = FieldDescriptor(5)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def annuli_file(tmp_path, *pairs):
    zero = pa.zero(Q5)
    comps = [ss.make_component(dk.open_disk(zero, a), [dk.closed_disk(zero, b)]) for a, b in pairs]
    return write(tmp_path, "annuli.json", ss.dumps(ss.make_subset(Q5, comps)))


@pytest.fixture
def fixture_file(tmp_path):
    return write(tmp_path, "fx.json", cr.fixture_files()[0].read_text())


class TestComplexity:
    def test_fixture(self, fixture_file, capsys):
        assert main(["complexity", fixture_file]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "3"
        assert out[1] == "part 1: complexity 2, 1 component(s), field Q_5"
        assert len(out) == 3

    def test_empty(self, tmp_path, capsys):
        assert main(["complexity", write(tmp_path, "e.json", ss.dumps(ss.empty(Q5)))]) == 0
        assert capsys.readouterr().out == "0\n"

    def test_unramified_base(self, fixture_file, capsys):
        assert main(["complexity", fixture_file, "--base", "5:2"]) == 0
        assert capsys.readouterr().out.splitlines()[0] == "3"

    @pytest.mark.parametrize("text", ["{", '{"schema": "nope"}'])
    def test_unreadable_subset(self, tmp_path, text, capsys):
        assert main(["complexity", write(tmp_path, "bad.json", text)]) == 2
        assert "invalid subset" in capsys.readouterr().err

    def test_overlapping_components(self, tmp_path, capsys):
        zero = pa.zero(Q5)
        X = ss.make_subset(Q5, [ss.make_component(dk.open_disk(zero, 0)),
                                ss.make_component(dk.open_disk(zero, 1))])
        assert main(["complexity", write(tmp_path, "o.json", ss.dumps(X))]) == 2

    def test_random_is_seeded(self, capsys):
        main(["complexity", "--random", "3", "--seed", "11"])
        first = capsys.readouterr().out
        main(["complexity", "--random", "3", "--seed", "11"])
        assert capsys.readouterr().out == first


class TestBudget:
    def test_rows(self, capsys):
        assert main(["budget", "--base", "5", "--m", "3"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].split() == ["m", "1", "2", "3"]
        assert out[-1] == "degree cap 12"
        names = [line.split()[0] for line in out[1:-1]]
        assert len(names) == len(set(names)) >= 4

    def test_base_is_required(self):
        with pytest.raises(SystemExit) as info:
            main(["budget", "--m", "3"])
        assert info.value.code == 2

    def test_bad_base(self):
        with pytest.raises(SystemExit):
            main(["budget", "--base", "4:1", "--m", "3"])


class TestReconstruct:
    def test_file_oracle(self, fixture_file, tmp_path, capsys):
        out, log = str(tmp_path / "out.json"), str(tmp_path / "log.ndjson")
        rc = main(["reconstruct", "--base", "5", "--oracle", "file:" + fixture_file,
                   "--m", "3", "--epsilon", "23", "--out", out, "--log", log])
        assert rc == 0
        assert ss.loads(open(out).read()) == cr.fixture("X(26,r0)").locus
        entries = [json.loads(line) for line in open(log)]
        assert entries and set(entries[0]) == {"point", "answer", "stage"}
        assert "queries" in capsys.readouterr().err

    def test_exec_oracle_matches_file_oracle(self, fixture_file, tmp_path):
        logs = []
        for spec in ("file:" + fixture_file,
                     "exec:%s -m padic_loci oracle-serve %s" % (sys.executable, fixture_file)):
            log = str(tmp_path / ("log%d" % len(logs)))
            assert main(["reconstruct", "--base", "5", "--oracle", spec, "--m", "3",
                         "--epsilon", "23", "--out", str(tmp_path / "o.json"), "--log", log]) == 0
            logs.append(open(log).read())
        assert logs[0] == logs[1]

    def test_runs_are_deterministic(self, tmp_path, capsys):
        outs = []
        for jobs in ("1", "1", "3"):
            main(["reconstruct", "--base", "5", "--oracle", "file:" + annuli_file(tmp_path, (0, 2)),
                  "--m", "3", "--epsilon", "3", "--log", str(tmp_path / "log"), "--jobs", jobs])
            outs.append((capsys.readouterr().out, open(tmp_path / "log").read()))
        assert outs[0] == outs[1] == outs[2]

    def test_bound_violated(self, tmp_path, capsys):
        path = annuli_file(tmp_path, (0, 1), (2, 3))
        rc = main(["reconstruct", "--base", "5", "--oracle", "file:" + path, "--m", "2",
                   "--epsilon", "4", "--out", str(tmp_path / "o.json")])
        assert rc == 3
        assert "bound violated" in capsys.readouterr().err

    def test_protocol_error(self, tmp_path, capsys):
        cmd = "%s -c \"print('garbage', flush=True)\"" % sys.executable
        rc = main(["reconstruct", "--base", "5", "--oracle", "exec:" + cmd, "--m", "1",
                   "--epsilon", "1", "--timeout", "5"])
        assert rc == 4
        assert "protocol error" in capsys.readouterr().err

    def test_unreachable_server(self, capsys):
        rc = main(["reconstruct", "--base", "5", "--oracle", "serve:127.0.0.1:1", "--m", "1",
                   "--epsilon", "1", "--timeout", "2"])
        assert rc == 4

    def test_query_cap(self, fixture_file, tmp_path):
        rc = main(["reconstruct", "--base", "5", "--oracle", "file:" + fixture_file, "--m", "3",
                   "--epsilon", "23", "--max-queries", "5", "--out", str(tmp_path / "o.json")])
        assert rc == 5


class TestOtherCommands:
    def test_fixtures(self, capsys):
        assert main(["fixtures"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert len(out) == 9 and all(line.endswith("ok") for line in out)

    def test_fixture_reconstruction(self, capsys):
        assert main(["fixtures", "--id", "X(28,r0(1))", "--reconstruct"]) == 0
        assert "reconstructed exactly" in capsys.readouterr().out

    def test_unknown_fixture(self):
        assert main(["fixtures", "--id", "nope"]) == 1

    def test_find_point(self, tmp_path, capsys):
        D = dk.open_disk(pa.uniformizer(FieldDescriptor(3, 1, 3)), Fraction(1, 3))
        assert main(["find-point", write(tmp_path, "d.json", json.dumps(D.to_json()))]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["degree"] == 3
        assert dk.contains(D, pa.PadicElement.from_json(out["point"]))

    def test_find_point_needs_a_field_of_definition(self, tmp_path, capsys):
        D = dk.open_disk(pa.uniformizer(FieldDescriptor(5, 1, 2)), 1)
        path = write(tmp_path, "d.json", json.dumps(D.to_json()))
        assert main(["find-point", path]) == 1
        assert "not defined over Q_5" in capsys.readouterr().err
        assert main(["find-point", path, "--base", "5:1:2"]) == 0

    def test_serve_dump(self, tmp_path, monkeypatch, capsys):
        x = pa.from_int(Q5, 0)
        monkeypatch.setattr(sys, "stdin", io.StringIO(
            json.dumps({"id": 1, "point": x.to_json()}) + "\n"))
        dump = str(tmp_path / "dump.json")
        assert main(["oracle-serve", "--random", "5", "--seed", "4", "--dump", dump]) == 0
        X = ss.loads(open(dump).read())
        reply = json.loads(capsys.readouterr().out)
        assert reply == {"id": 1, "member": ss.member(X, x)}
