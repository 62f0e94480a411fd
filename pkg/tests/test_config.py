"""Config resolution: defaults, units, overrides, hashing."""

import json

import pytest

from optomech.config import (
    ConfigError,
    DEFAULTS,
    SI_C,
    SI_HBAR,
    config_hash,
    load_config_file,
    resolve_config,
)


def test_natural_units_default():
    cfg = resolve_config()
    assert cfg.c == 1.0 and cfg.hbar == 1.0
    assert cfg.units == "natural"


def test_si_units_resolution():
    cfg = resolve_config({"units": "SI"})
    assert cfg.c == SI_C
    assert cfg.hbar == SI_HBAR


def test_explicit_constants_beat_units():
    cfg = resolve_config({"units": "SI", "c": 3.0e8})
    assert cfg.c == 3.0e8
    assert cfg.hbar == SI_HBAR


def test_flags_win_over_file():
    cfg = resolve_config({"kmax": 2, "omega_c": 5.0}, {"kmax": 7})
    assert cfg.kmax == 7
    assert cfg.omega_c == 5.0


def test_none_overrides_are_skipped():
    cfg = resolve_config({"kmax": 2}, {"kmax": None})
    assert cfg.kmax == 2


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        resolve_config({"frequency": 1.0})
    with pytest.raises(ConfigError):
        resolve_config(None, {"frequency": 1.0})
    with pytest.raises(ConfigError):
        resolve_config({"grid": {"frequency": [1.0]}})


def test_bad_enum_values():
    with pytest.raises(ConfigError):
        resolve_config({"units": "imperial"})
    with pytest.raises(ConfigError):
        resolve_config({"out_format": "xml"})
    with pytest.raises(ConfigError):
        resolve_config({"r_convention": "rounded"})


def test_hash_is_stable_and_sensitive():
    a = config_hash(resolve_config({"kmax": 2}))
    b = config_hash(resolve_config({"kmax": 2}))
    c = config_hash(resolve_config({"kmax": 3}))
    assert a == b
    assert a != c
    assert len(a) == 12


def test_load_config_file_diagnostics(tmp_path):
    good = tmp_path / "ok.json"
    good.write_text(json.dumps({"mass": 2.0}))
    assert load_config_file(str(good)) == {"mass": 2.0}
    top_level = tmp_path / "arr.json"
    top_level.write_text("[1, 2]")
    with pytest.raises(ConfigError):
        load_config_file(str(top_level))
    bad = tmp_path / "bad.json"
    bad.write_text('{"mass": 1,\n "oops\n')
    with pytest.raises(ConfigError, match="line 2"):
        load_config_file(str(bad))


def test_every_default_key_resolves():
    cfg = resolve_config()
    for key in DEFAULTS:
        assert hasattr(cfg, key)
