import json
from unittest.mock import patch

import pytest

from liecov.cli import build_parser, job_config, main
from liecov.errors import InvalidInput
from liecov.formats import format_algebra, parse_polymap
from liecov.polyalg import constant_map


def run(capsys, *argv):
    """Run the CLI and return (exit code, stdout, stderr)"""
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBasisCommand:
    """liecov basis"""

    def test_sl2_json(self, capsys):
        code, out, _ = run(capsys, 'basis', '--algebra', 'sl2')
        assert code == 0
        report = json.loads(out)
        assert report['r'] == 1
        assert report['degrees'] == [1]
        assert report['algebra'] == 'sl2'

    def test_sl3_degrees(self, capsys):
        code, out, _ = run(capsys, 'basis', '--algebra', 'sl3', '--rep', 'adjoint')
        assert code == 0
        assert json.loads(out)['degrees'] == [1, 2]

    def test_text_format(self, capsys):
        code, out, _ = run(capsys, 'basis', '--format', 'text')
        assert code == 0
        assert out.startswith('# sl2 adjoint: r=1 degrees=[1]')

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / 'basis.json'
        code, out, _ = run(capsys, 'basis', '--rep', 'irrep:2', '--out', str(target))
        assert code == 0
        assert out == ''
        assert json.loads(target.read_text())['degrees'] == [2]

    def test_output_is_deterministic(self, capsys):
        first = run(capsys, 'basis', '--algebra', 'sl3')[1]
        second = run(capsys, 'basis', '--algebra', 'sl3')[1]
        assert first == second

    def test_algebra_file_through_manage(self, capsys, seed_dir):
        import manage

        argv = ['manage.py', 'basis', '--algebra', str(seed_dir / 'so3.alg')]
        with patch('sys.argv', argv):
            code = manage.main()
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report['algebra'] == 'so3'
        assert report['degrees'] == [1]

    def test_written_algebra_file(self, capsys, sl3, tmp_path):
        source = tmp_path / 'sl3.alg'
        source.write_text(format_algebra(sl3))
        code, out, _ = run(capsys, 'basis', '--algebra', str(source))
        assert code == 0
        assert json.loads(out)['degrees'] == [1, 2]

    def test_degree_bound_too_small(self, capsys):
        code, out, err = run(capsys, 'basis', '--algebra', 'sl3', '--degree-bound', '1')
        assert code == 2
        assert 'DegreeBoundExceeded' in err
        assert json.loads(out)['exit_code'] == 2


class TestDecomposeCommand:
    def test_trace_times_identity(self, capsys, seed_dir):
        code, out, _ = run(capsys, 'decompose', '--input',
                           str(seed_dir / 'sl2_trace_times_identity.txt'))
        assert code == 0
        assert json.loads(out)['coefficients'] == ['2 : 2 0 0\n2 : 0 1 1']

    def test_not_covariant(self, capsys, seed_dir):
        code, out, err = run(capsys, 'decompose', '--input',
                             str(seed_dir / 'sl2_constant.txt'))
        assert code == 3
        assert 'decompose: NotCovariant' in err
        assert json.loads(out)['error'] == 'NotCovariant'

    def test_samples(self, capsys, seed_dir):
        code, out, _ = run(capsys, 'decompose', '--samples',
                           str(seed_dir / 'sl2_trace_samples.txt'))
        assert code == 0
        report = json.loads(out)
        assert [c[0] for c in report['coefficients']] == pytest.approx([2, 14, 2, 6])
        assert report['points'][1] == ['1', '2', '3']

    def test_input_and_samples_exclusive(self, capsys, seed_dir):
        path = str(seed_dir / 'sl2_identity.txt')
        code, _, _ = run(capsys, 'decompose', '--input', path, '--samples', path)
        assert code == 1


class TestDivideCommand:
    def test_tangent_field(self, capsys, seed_dir):
        code, out, _ = run(capsys, 'divide', '--input',
                           str(seed_dir / 'sl2_tangent_field.txt'))
        assert code == 0
        quotient = parse_polymap(json.loads(out)['quotient'], 3)
        assert quotient == constant_map((0, 1, 0), 3)
        assert json.loads(out)['tangency_defect'] == ['0']

    def test_not_tangent(self, capsys, seed_dir):
        code, _, err = run(capsys, 'divide', '--input', str(seed_dir / 'sl2_identity.txt'))
        assert code == 4
        assert 'NotTangent' in err

    def test_experimental(self, capsys, seed_dir):
        code, out, _ = run(capsys, 'divide', '--experimental', '--input',
                           str(seed_dir / 'sl2_tangent_field.txt'))
        assert code == 0
        report = json.loads(out)
        assert report['experimental'] is True
        assert len(report['quotients']) == 1


class TestRealifyCommand:
    def test_scrambled_basis(self, capsys):
        code, out, _ = run(capsys, 'realify', '--algebra', 'sl3', '--seed', '3')
        assert code == 0
        report = json.loads(out)
        assert report['degrees'] == [1, 2]
        assert [step['degree'] for step in report['steps']] == [1, 2]

    def test_generator_file(self, capsys, seed_dir, tmp_path):
        source = tmp_path / 'generators.txt'
        source.write_text("i : 1 0 0\n---\ni : 0 1 0\n---\ni : 0 0 1\n")
        code, out, _ = run(capsys, 'realify', '--input', str(source))
        assert code == 0
        assert json.loads(out)['steps'][0]['lambda'] == [['-1']]

    def test_non_covariant_generator(self, capsys, seed_dir):
        code, _, _ = run(capsys, 'realify', '--input', str(seed_dir / 'sl2_constant.txt'))
        assert code == 3


class TestFactorCommand:
    def test_through_gradients(self, capsys, seed_dir):
        code, out, _ = run(capsys, 'factor', '--input',
                           str(seed_dir / 'sl2_adjoint_order1.dist'))
        assert code == 0
        report = json.loads(out)
        assert len(report['thetas']) == 1
        assert report['supported_at_origin'] is True

    def test_generator_needs_one_generator(self, capsys, tmp_path):
        source = tmp_path / 'delta.dist'
        source.write_text("0 0 0 0 0 0 0 0 | 0 0 0 0 0 0 0 0 | 0 | 1\n")
        code, _, err = run(capsys, 'factor', '--algebra', 'sl3', '--via', 'generator',
                           '--input', str(source))
        assert code == 1
        assert 'InvalidInput' in err

    def test_gradients_need_adjoint(self, capsys, tmp_path):
        source = tmp_path / 'delta.dist'
        source.write_text("0 0 0 | 0 0 0 | 0 | 1\n")
        code, _, _ = run(capsys, 'factor', '--rep', 'trivial', '--input', str(source))
        assert code == 1


class TestUsageErrors:
    """Argument errors exit with code 1."""

    def test_unknown_algebra(self, capsys):
        code, _, err = run(capsys, 'basis', '--algebra', 'e8')
        assert code == 1
        assert 'e8' in err

    def test_missing_command(self, capsys):
        assert run(capsys)[0] == 1

    def test_bad_format(self, capsys):
        assert run(capsys, 'basis', '--format', 'yaml')[0] == 1

    def test_negative_tolerance(self, capsys):
        assert run(capsys, 'basis', '--tol-input', '-1')[0] == 1

    def test_missing_input_file(self, capsys, tmp_path):
        code, _, err = run(capsys, 'divide', '--input', str(tmp_path / 'nope.txt'))
        assert code == 1
        assert 'file not found' in err


class TestJobConfig:
    """Flags override configuration values."""

    def test_defaults_from_settings(self):
        from config import TestingConfig

        args = build_parser().parse_args(['basis'])
        cfg = job_config(args, TestingConfig)
        assert cfg.seed == 0
        assert cfg.threads == 1
        assert cfg.format == 'json'
        assert cfg.tol_input == TestingConfig.TOL_INPUT

    def test_flags_win(self):
        from config import TestingConfig

        args = build_parser().parse_args(['basis', '--seed', '9', '--format', 'text'])
        cfg = job_config(args, TestingConfig)
        assert cfg.seed == 9
        assert cfg.format == 'text'

    def test_parser_errors_raise(self):
        with pytest.raises(InvalidInput):
            build_parser().parse_args(['nonsense'])


class TestSelftestCommand:
    def test_delegates_to_runner(self, capsys):
        with patch('liecov.selftest.run_selftest', return_value=0) as runner:
            code, _, _ = run(capsys, 'selftest', '--seed', '5', '--full')
        assert code == 0
        runner.assert_called_once_with(seed=5, full=True)
