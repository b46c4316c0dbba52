import json

from sympy import QQ

from src.utils import Config, binomial, format_rational, make_rng, random_integers


def test_config_defaults(tmp_path):
    config = Config(tmp_path / "config.json")
    assert config.get("random", "retries") == 5
    assert config.get("resolution", "degree_slack") == 2


def test_config_merges_sections(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"random": {"retries": 9}}))
    config = Config(path)
    assert config.get("random", "retries") == 9
    assert config.get("random", "coefficient_bound") == 50
    config.save_config()
    assert json.loads(path.read_text())["scenarios"]["instanton_lines"] == 5


def test_config_ignores_broken_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{no es json")
    assert Config(path).get("groebner", "selection") == "normal"


def test_seeded_generator_is_reproducible():
    first = random_integers(make_rng(7), 10)
    assert first == random_integers(make_rng(7), 10)
    assert all(-50 <= v <= 50 for v in first)
    rng = make_rng(1)
    assert make_rng(rng) is rng


def test_nonzero_vectors():
    rng = make_rng(3)
    for _ in range(200):
        assert any(random_integers(rng, 2, bound=1, nonzero=True))


def test_formatting():
    assert format_rational(QQ(3, 6)) == "1/2"
    assert format_rational(QQ(-4)) == "-4"


def test_binomial():
    assert binomial(5, 2) == 10
    assert binomial(2, 5) == 0
    assert binomial(-1, 0) == 0
    assert binomial(3, -1) == 0
