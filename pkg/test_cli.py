import io
import json
import logging
import math

import numpy as np
import pytest

from application import create_app
from config import Config, get_config
from main import main
from services.hermitian import HermitianMatrix
from services.miner import counterexample_miner
from services.verifier import verification_service
from utils.file_utils import (
    MatrixFileError,
    parse_matrix,
    read_matrix_file,
    render_report,
    serialize_matrix,
    write_report,
)
from utils.helpers import chunk_list, format_duration, parse_dims, parse_float_list, parse_name_list

NON_DETERMINISTIC = ('elapsed_seconds', 'timestamp')


@pytest.fixture
def app():
    application = create_app('testing')
    application.stdout = io.StringIO()
    return application


def run(app, *argv):
    """Run one command and return (exit code, parsed report or None)"""
    app.stdout = io.StringIO()
    code = app.run(list(argv))
    text = app.stdout.getvalue()
    return code, json.loads(text) if text else None


def write_matrix(path, real, imag=None):
    document = {'dim': len(real), 'real': real}
    if imag is not None:
        document['imag'] = imag
    path.write_text(json.dumps(document))
    return str(path)


# Matrix documents

def test_parse_identity():
    matrix = parse_matrix('{"dim": 2, "real": [[1, 0], [0, 1]]}')
    assert np.array_equal(matrix.entries, np.eye(2))


def test_parse_imaginary_part():
    matrix = parse_matrix('{"dim": 2, "real": [[0, 0], [0, 0]], "imag": [[0, 1], [-1, 0]]}')
    assert np.allclose(matrix.entries, [[0.0, 1j], [-1j, 0.0]])
    assert np.allclose(matrix.spectrum.eigenvalues, [-1.0, 1.0])


@pytest.mark.parametrize("text", [
    '{"dim": 2, "real": [[1, 2], [3, 1]]}',
    '{"dim": 2, "real": [[1, 0]]}',
    '{"dim": 2, "real": [[1, 0], [0]]}',
    '{"dim": 0, "real": []}',
    '{"dim": true, "real": [[1]]}',
    '{"dim": 1, "real": [["a"]]}',
    '{"real": [[1]]}',
    '[1, 2]',
    'not json',
])
def test_parse_rejects_invalid_documents(text):
    with pytest.raises(MatrixFileError):
        parse_matrix(text)


def test_parse_warns_and_symmetrizes_small_asymmetry(caplog):
    matrix = parse_matrix('{"dim": 2, "real": [[1, 0.00001], [0, 1]]}')
    assert matrix.entries[0, 1] == pytest.approx(0.000005)
    assert 'asymmetry' in caplog.text


def test_serialization_reproduces_matrix_exactly():
    original = HermitianMatrix(np.array([[0.1, 0.2 + 0.3j], [0.2 - 0.3j, 1.0 / 3.0]]))
    assert np.array_equal(parse_matrix(serialize_matrix(original)).entries, original.entries)


def test_serialization_omits_zero_imaginary_part():
    assert 'imag' not in json.loads(serialize_matrix(HermitianMatrix.identity(2)))


def test_read_missing_file(tmp_path):
    with pytest.raises(MatrixFileError):
        read_matrix_file(str(tmp_path / 'missing.json'))


def test_render_report_handles_infinity_and_numpy_scalars():
    document = json.loads(render_report({'gap': math.inf, 'value': np.float64(0.5), 'items': (np.int64(2),)}))
    assert document == {'gap': 'Infinity', 'value': 0.5, 'items': [2]}


def test_write_report_to_file(tmp_path):
    target = tmp_path / 'reports' / 'run.json'
    write_report({'command': 'verify'}, str(target))
    assert json.loads(target.read_text()) == {'command': 'verify'}


# Helpers and configuration

def test_parse_dims():
    assert parse_dims('1..8') == list(range(1, 9))
    assert parse_dims('3') == [3]
    for text in ('0..2', '5..2', 'a..b'):
        with pytest.raises(ValueError):
            parse_dims(text)


def test_parse_lists():
    assert parse_float_list('0.1, 0.25') == [0.1, 0.25]
    assert parse_name_list('xlogx, resolvent:1') == ['xlogx', 'resolvent:1']
    with pytest.raises(ValueError):
        parse_float_list('')


def test_chunk_list_and_duration():
    assert chunk_list([1, 2, 3, 4, 5], 2) == [[1, 2], [3, 4], [5]]
    assert format_duration(30) == '30.0 seconds'
    assert format_duration(120) == '2.0 minutes'


def test_environment_configs():
    assert get_config('testing').DEFAULT_TRIALS == 50
    assert get_config('production').DEFAULT_TRIALS == 500
    assert get_config('unknown') is get_config('development')
    assert Config.PSD_TOLERANCE == 1e-8
    assert get_config('testing').validate()


def test_config_validation_rejects_bad_settings():
    class BrokenConfig(Config):
        QUADRATURE_NODES = 4
        EIGEN_FLOOR = 0.0

    with pytest.raises(ValueError, match='QUADRATURE_NODES'):
        BrokenConfig.validate()


# verify

def test_verify_operator_convex_function_passes(app):
    code, report = run(app, 'verify', '--suite', 'theorem1', '--functions', 'xlogx', '--trials', '10', '--seed', '7')

    assert code == 0
    assert report['tool'] == 'opconv'
    assert report['version'] == Config.VERSION
    assert report['seed'] == 7
    assert report['functions'] == {'xlogx': {'pass': 10, 'fail': 0, 'worst_min_eigenvalue': report['worst_min_eigenvalue']}}
    assert report['all_passed'] is True
    assert report['counterexample'] is None


def test_verify_counterexample_function_fails(app):
    code, report = run(app, 'verify', '--suite', 'theorem1', '--functions', 'g_counter', '--trials', '100', '--seed', '7')

    assert code == 1
    counts = report['functions']['g_counter']
    assert counts['pass'] + counts['fail'] == 100
    assert counts['fail'] > 0
    assert report['counterexample']['function'] == 'g_counter'
    assert report['counterexample']['min_gap_eigenvalue'] < 0
    assert len(report['worst_offenders']) <= Config.WORST_OFFENDERS


def test_verify_strengthened_ah(app):
    code, report = run(app, 'verify', '--suite', 'ah', '--trials', '10', '--seed', '1')
    assert code == 0
    assert report['functions']['strengthened_ah']['pass'] == 10


@pytest.mark.parametrize("suite", ['bregman', 'dilation', 'entropy', 'petz', 'derivatives', 'representation'])
def test_verify_other_suites_pass(app, suite):
    code, report = run(app, 'verify', '--suite', suite, '--trials', '3', '--seed', '5', '--dims', '1..3')
    assert code == 0, report['worst_offenders']
    assert all(counts['fail'] == 0 for counts in report['functions'].values())


def test_verify_is_deterministic(app):
    argv = ['verify', '--suite', 'theorem1', '--functions', 'resolvent:1,neglog', '--trials', '8', '--seed', '21']
    _, first = run(app, *argv)
    _, second = run(app, *argv)

    for key in NON_DETERMINISTIC:
        first.pop(key)
        second.pop(key)
    assert first == second


@pytest.mark.parametrize("argv", [
    ['verify', '--functions', 'cube', '--trials', '2'],
    ['verify', '--c', '0,0.5', '--trials', '2'],
    ['verify', '--suite', 'nonsense'],
    ['verify', '--dims', '5..2'],
    ['verify', '--seed', '-1'],
    [],
])
def test_verify_input_errors(app, argv):
    code, report = run(app, *argv)
    assert code == 2
    assert report is None


def test_verify_report_to_file(app, tmp_path):
    target = tmp_path / 'verify.json'
    code, printed = run(app, 'verify', '--suite', 'ah', '--trials', '2', '--out', str(target))

    assert code == 0
    assert printed is None
    assert json.loads(target.read_text())['suite'] == 'ah'


def test_commands_use_environment_worker_count(app):
    verification_service.max_workers = counterexample_miner.max_workers = 7
    run(app, 'verify', '--suite', 'theorem1', '--functions', 'xlogx', '--trials', '2', '--seed', '1')
    run(app, 'mine', '--function', 'xlogx', '--seed', '1', '--trials', '2', '--dims', '1..1', '--c', '0.25')

    assert verification_service.max_workers == get_config('testing').MAX_WORKERS
    assert counterexample_miner.max_workers == get_config('testing').MAX_WORKERS


# gap

def test_gap_equal_arguments(app, tmp_path):
    a = write_matrix(tmp_path / 'a.json', [[2.0, 0.5], [0.5, 1.0]])
    code, report = run(app, 'gap', '--a', a, '--b', a, '--c', '0.3', '--function', 'xlogx')

    assert code == 0
    assert abs(report['min_eigenvalue']) <= 1e-12
    assert report['branch'] == 'bregman'


def test_gap_scalar_neglog(app, tmp_path):
    a = write_matrix(tmp_path / 'a.json', [[1.0]])
    b = write_matrix(tmp_path / 'b.json', [[3.0]])
    code, report = run(app, 'gap', '--a', a, '--b', b, '--c', '0.25', '--function', 'neglog')

    assert code == 0
    assert report['min_eigenvalue'] >= 0.0
    assert math.isfinite(report['min_eigenvalue'])


def test_gap_square_equality(app, tmp_path):
    a = write_matrix(tmp_path / 'a.json', [[2.0, 0.0], [0.0, 1.0]], imag=[[0.0, 0.5], [-0.5, 0.0]])
    b = write_matrix(tmp_path / 'b.json', [[1.0, 0.3], [0.3, 4.0]])
    code, report = run(app, 'gap', '--a', a, '--b', b, '--c', '0.5', '--function', 'square')

    assert code == 0
    assert report['gap_norm'] <= 1e-10
    assert report['branch'] == 'midpoint'


def test_gap_counterexample_exit_code(app, tmp_path):
    a = write_matrix(tmp_path / 'a.json', [[1.0]])
    b = write_matrix(tmp_path / 'b.json', [[3.0]])
    code, report = run(app, 'gap', '--a', a, '--b', b, '--c', '0.25', '--function', 'g_counter')

    assert code == 1
    assert report['min_eigenvalue'] == pytest.approx(-0.001671, abs=2e-6)


@pytest.mark.parametrize("real", [[[0.0, 0.0], [0.0, 1.0]], [[1.0, 2.0], [3.0, 1.0]]])
def test_gap_input_errors(app, tmp_path, real):
    a = write_matrix(tmp_path / 'a.json', real)
    b = write_matrix(tmp_path / 'b.json', [[1.0, 0.0], [0.0, 1.0]])
    code, _ = run(app, 'gap', '--a', a, '--b', b, '--c', '0.3', '--function', 'neglog')
    assert code == 2


def test_gap_missing_file(app, tmp_path):
    code, _ = run(app, 'gap', '--a', str(tmp_path / 'nope.json'), '--b', str(tmp_path / 'nope.json'))
    assert code == 2


# entropy

def test_entropy_orthogonal_pure_states(app, tmp_path):
    rho = write_matrix(tmp_path / 'rho.json', [[1.0, 0.0], [0.0, 0.0]])
    sigma = write_matrix(tmp_path / 'sigma.json', [[0.0, 0.0], [0.0, 1.0]])
    code, report = run(app, 'entropy', '--rho', rho, '--sigma', sigma, '--c', '0.5')

    assert code == 0
    assert report['concavity_gap'] == pytest.approx(math.log(2.0), abs=1e-12)
    assert report['corollary_gap'] == pytest.approx(0.193147, abs=1e-6)
    assert report['pinsker_gap'] == 'Infinity'
    assert 'intermediate_gap' not in report
    assert report['violations'] == []


def test_entropy_identical_states(app, tmp_path):
    rho = write_matrix(tmp_path / 'rho.json', [[0.7, 0.1], [0.1, 0.3]])
    code, report = run(app, 'entropy', '--rho', rho, '--sigma', rho, '--c', '0.25')

    assert code == 0
    for key in ('concavity_gap', 'corollary_gap', 'pinsker_gap', 'intermediate_gap', 'chain_gap'):
        assert report[key] == pytest.approx(0.0, abs=1e-12)


def test_entropy_rejects_non_density(app, tmp_path):
    rho = write_matrix(tmp_path / 'rho.json', [[0.5, 0.0], [0.0, 0.6]])
    code, report = run(app, 'entropy', '--rho', rho, '--sigma', rho)
    assert code == 2
    assert report is None


def test_entropy_single_state(app, tmp_path):
    rho = write_matrix(tmp_path / 'rho.json', [[1.0]])
    code, report = run(app, 'entropy', '--rho', rho, '--sigma', rho, '--delta', '0.1')

    assert code == 0
    assert report['continuity_gap'] == 0.0
    assert report['midpoint_lower_bound'] == 0.0


# mine

def test_mine_counterexample_function(app):
    code, report = run(app, 'mine', '--function', 'g_counter', '--seed', '3', '--trials', '20', '--dims', '1..2')

    assert code == 1
    record = report['counterexample']
    assert record['min_gap_eigenvalue'] <= -1e-4
    assert record['recomputed_min_gap_eigenvalue'] == pytest.approx(record['min_gap_eigenvalue'], abs=1e-9)
    assert report['instances_evaluated'] > 20
    assert 0.5 not in report['c_grid']


@pytest.mark.parametrize("name", ['xlogx', 'square'])
def test_mine_operator_convex_function(app, name):
    code, report = run(app, 'mine', '--function', name, '--seed', '3', '--trials', '30', '--dims', '1..3')

    assert code == 0
    assert report['violation_found'] is False
    assert report['counterexample'] is None


@pytest.mark.parametrize("argv", [
    ['mine', '--function', 'cube'],
    ['mine', '--function', 'g_counter', '--c', '0.5'],
    ['mine', '--function', 'g_counter', '--dims', '1..9'],
])
def test_mine_input_errors(app, argv):
    code, _ = run(app, *argv)
    assert code == 2


# entry point

@pytest.fixture
def restore_root_logging():
    root_logger = logging.getLogger()
    handlers, level = list(root_logger.handlers), root_logger.level
    yield
    for handler in list(root_logger.handlers):
        root_logger.removeHandler(handler)
    for handler in handlers:
        root_logger.addHandler(handler)
    root_logger.setLevel(level)


def test_main_entry_point(capsys, restore_root_logging):
    code = main(['--env', 'testing', 'verify', '--suite', 'ah', '--trials', '2', '--seed', '4'])
    report = json.loads(capsys.readouterr().out)

    assert code == 0
    assert report['command'] == 'verify'
    assert report['suite'] == 'ah'
