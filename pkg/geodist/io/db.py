"""
Database module
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import os
import sqlite3
from pathlib import Path

import numpy as np

from .logging import logger


class Database:
    """Thin sqlite wrapper used to store sweep results, one record per grid point"""

    DTYPE_MAPPER = {
        type(None): "NULL",
        int: "INTEGER",
        np.int64: "INTEGER",
        float: "REAL",
        np.float64: "REAL",
        complex: "TEXT",
        str: "TEXT",
        bytes: "BLOB",
        bool: "INTEGER",
    }

    def __init__(self, database_name: str = "", remove_database: bool = False) -> None:
        logger.debug(f" Database: connecting to `{database_name}`")

        # filename
        self.database_filename = database_name

        # remove if necessary
        if remove_database:
            self.remove_database()

        # make parent directory if needed
        Path(database_name).parent.mkdir(parents=True, exist_ok=True)

        # only after trying to remove, create connection
        self.connection = sqlite3.connect(database_name)
        self.cursor = self.connection.cursor()

    def commit(self) -> None:
        self.connection.commit()

    def remove_database(self) -> None:
        try:
            os.remove(self.database_filename)
        except FileNotFoundError:
            pass

    @staticmethod
    def _adapt(value: Any) -> Any:
        """Convert numpy scalars and complex numbers into sqlite-friendly values"""
        if isinstance(value, np.generic):
            value = value.item()
        if isinstance(value, complex):
            return f"{value.real:.17g}{value.imag:+.17g}j"
        return value

    def create_table(self, table_name: str = "", table_data_dict: Dict[Any, Any] = {}) -> None:
        """Create `table_name` with one column per key of `table_data_dict`, typed by its value"""
        logger.debug(f" Database: creating table `{table_name}`")

        columns = ", ".join(
            f"{key} {self.DTYPE_MAPPER.get(type(value), 'TEXT')}"
            for key, value in table_data_dict.items()
        )
        self.execute(f"CREATE TABLE IF NOT EXISTS {table_name} ({columns});")
        self.commit()

    def drop_table(self, table_name: str = "") -> None:
        logger.debug(f" Database: dropping table `{table_name}`")

        self.execute(f"DROP TABLE IF EXISTS {table_name};")
        self.commit()

    def insert_record(self, table_name: str = "", table_data_dict: Dict[Any, Any] = {}) -> None:
        logger.debug(f" Database: inserting record into table `{table_name}`")

        names = ", ".join(table_data_dict.keys())
        marks = ", ".join("?" for _ in table_data_dict)
        values = tuple(self._adapt(v) for v in table_data_dict.values())

        self.execute(f"INSERT INTO {table_name} ({names}) VALUES ({marks});", values)
        self.commit()

    def fetch(
        self,
        table_name: str = "",
        column_name: str = "*",
        constraint: str = "",
        parameters: Sequence[Any] = (),
    ) -> List[Tuple[Any, ...]]:

        sql: str = f"SELECT {column_name} FROM {table_name}"
        if len(constraint) > 0:
            sql += f" WHERE {constraint};"
        else:
            sql += ";"

        self.execute(sql, parameters)
        return self.cursor.fetchall()

    def execute(self, sql: str = "", parameters: Optional[Sequence[Any]] = None) -> None:
        logger.debug(f"  executing sql command: '{sql}'")
        if parameters:
            self.cursor.execute(sql, tuple(parameters))
        else:
            self.cursor.execute(sql)

    def __del__(self) -> None:
        try:
            self.connection.close()
        except Exception:
            pass

    def __enter__(self) -> "Database":
        return self

    def __exit__(self, ext_type: Any, exc_value: Any, traceback: Any) -> None:
        self.cursor.close()
        if isinstance(exc_value, Exception):
            self.connection.rollback()
        else:
            self.commit()
        self.connection.close()
