import logging

from driftbench.utils import get_logger, setup_logger


def test_setup_replaces_previous_handlers(tmp_path):
    first = setup_logger(output=str(tmp_path / 'a'), name='driftbench.t')
    second = setup_logger(output=str(tmp_path / 'b'), name='driftbench.t')
    assert first is second
    assert len(second.handlers) == 2


def test_module_records_reach_the_log_file(tmp_path):
    logger = setup_logger(output=str(tmp_path), name='dbtest', color=False,
                          level=logging.WARNING)
    get_logger('dbtest.models.svm').debug('converged after 3 epochs')
    for handler in logger.handlers:
        handler.flush()
    text = (tmp_path / 'log.txt').read_text()
    assert 'dbtest.models.svm DEBUG: converged after 3 epochs' in text
