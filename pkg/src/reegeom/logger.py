import sys
import time
from enum import Enum
from typing import Union

from colorama import Fore, Style


class Logger:
    class Level(Enum):
        TRACE = 0
        DEBUG = 1
        INFO = 2
        WARNING = 3
        ERROR = 4

        @staticmethod
        def deserialize(s: str) -> 'Logger.Level':
            try:
                return Logger.Level[s.upper()]
            except KeyError:
                raise ValueError(f'unrecognized log level "{s}"') from None

    def __init__(self, level: 'Logger.Level' = None, stream=None):
        self.level = Logger.Level.WARNING if level is None else level
        self.stream = stream
        self.__started_at = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.__started_at

    def set_level(self, level: Union['Logger.Level', str]):
        if isinstance(level, str):
            level = Logger.Level.deserialize(level)
        self.level = level

    def is_enabled(self, level: 'Logger.Level') -> bool:
        return level.value >= self.level.value

    def write(self, level: 'Logger.Level', msg: str, src: str = ''):
        if not self.is_enabled(level):
            return
        color = Logger.level2font(level)
        level_str = f'{Style.BRIGHT}{color}[{level.name:7s}]{Style.RESET_ALL}'
        time_str = f'{Style.DIM}{self.elapsed:9.3f}s{Style.RESET_ALL}'
        src_str = f' {Style.BRIGHT}({src}){Style.NORMAL}' if src else ''
        stream = sys.stderr if self.stream is None else self.stream
        print(f'{level_str} {time_str}{src_str} {color}{msg}'
              f'{Style.RESET_ALL}', file=stream)

    def trace(self, msg: str, src: str = ''):
        self.write(Logger.Level.TRACE, msg, src)

    def debug(self, msg: str, src: str = ''):
        self.write(Logger.Level.DEBUG, msg, src)

    def info(self, msg: str, src: str = ''):
        self.write(Logger.Level.INFO, msg, src)

    def warning(self, msg: str, src: str = ''):
        self.write(Logger.Level.WARNING, msg, src)

    def error(self, msg: str, src: str = ''):
        self.write(Logger.Level.ERROR, msg, src)

    @staticmethod
    def level2font(level: 'Logger.Level'):
        if level is Logger.Level.TRACE:
            return Fore.LIGHTBLACK_EX
        if level is Logger.Level.DEBUG:
            return Fore.WHITE
        if level is Logger.Level.INFO:
            return Fore.MAGENTA
        if level is Logger.Level.WARNING:
            return Fore.YELLOW
        if level is Logger.Level.ERROR:
            return Fore.RED
        raise ValueError(f'unrecognized level "{level}"')


logger = Logger()
