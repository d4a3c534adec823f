import json
import os

import numpy as np
import pandas as pd
import pytest

from driftbench.utils import (BunchDict, atomic_write, config_hash,
                              read_json, write_csv, write_json)


def test_write_json_is_canonical(tmp_path):
    path = str(tmp_path / 'out' / 'r.json')
    write_json(BunchDict(b=np.int64(2), a=np.array([0.5, 1.0])), path)
    text = open(path, encoding='utf-8').read()
    assert text == '{\n  "a": [\n    0.5,\n    1.0\n  ],\n  "b": 2\n}\n'
    assert read_json(path) == {'a': [0.5, 1.0], 'b': 2}


def test_atomic_write_keeps_old_file_on_failure(tmp_path):
    path = tmp_path / 'x.txt'
    path.write_text('old')
    with pytest.raises(RuntimeError):
        with atomic_write(str(path)) as f:
            f.write('new')
            raise RuntimeError('boom')
    assert path.read_text() == 'old'
    assert os.listdir(tmp_path) == ['x.txt']


def test_write_csv_with_comment_line(tmp_path):
    path = str(tmp_path / 't.csv')
    write_csv(pd.DataFrame({'a': [1], 'f1': [0.25]}), path, comment='hello')
    assert open(path).read() == '# hello\na,f1\n1,0.250000\n'


def test_config_hash_ignores_key_order():
    assert config_hash({'a': 1, 'b': [1, 2]}) == config_hash({'b': [1, 2],
                                                             'a': 1})
    assert config_hash({'a': 1}) != config_hash({'a': 2})
    assert len(config_hash({})) == 64


def test_bunchdict_attribute_access():
    b = BunchDict(f1=0.9)
    b.fnr = 0.1
    assert b['fnr'] == 0.1 and b.f1 == 0.9
    assert json.loads(json.dumps(b.to_dict())) == {'f1': 0.9, 'fnr': 0.1}
    with pytest.raises(AttributeError):
        b.missing
