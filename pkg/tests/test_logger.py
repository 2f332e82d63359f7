import logging

from utils.logger import ColoredFormatter, get_logger, get_simulator_logger, setup_logger


def test_module_loggers_share_root():
    assert get_simulator_logger().name == 'CdmaBus.simulator'
    assert get_logger('codec').parent.name == 'CdmaBus'


def test_colour_does_not_leak_into_record():
    record = logging.LogRecord('CdmaBus', logging.WARNING, __file__, 1, 'careful', None, None)
    text = ColoredFormatter('%(levelname)s %(message)s').format(record)
    assert '\033[33m' in text
    assert record.levelname == 'WARNING'


def test_file_logging(tmp_path):
    logger = setup_logger('CdmaBusFileTest', log_level='INFO', log_dir=str(tmp_path),
                          console=False, file_logging=True)
    logger.info('written')
    for handler in logger.handlers:
        handler.flush()
    assert 'written' in (tmp_path / 'cdmabusfiletest.log').read_text()
