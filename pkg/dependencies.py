"""
Service wiring for the command line entry point.

Services are lazily initialized and cached for the process lifetime.
"""
import logging
from typing import Optional

from config import get_config
from services.experiments import ExperimentService
from services.table_writer import TableWriterService

logger = logging.getLogger(__name__)

# Global service instances (initialized on first use)
_experiment_service: Optional[ExperimentService] = None
_table_writer: Optional[TableWriterService] = None


def get_experiment_service() -> ExperimentService:
    """Get or create experiment service instance"""
    global _experiment_service
    if _experiment_service is None:
        cfg = get_config()
        _experiment_service = ExperimentService(cfg)
        logger.debug(f"Experiment service initialized: {cfg.as_dict()}")
    return _experiment_service


def get_table_writer() -> TableWriterService:
    """Get or create table writer instance"""
    global _table_writer
    if _table_writer is None:
        _table_writer = TableWriterService()
        logger.debug("Table writer initialized")
    return _table_writer


def cleanup_services() -> None:
    """Drop cached services so the next call picks up a reloaded config"""
    global _experiment_service, _table_writer
    _experiment_service = None
    _table_writer = None
