# errors.py
"""
Иерархия исключений fkit.

ParseError / UsageError -> код выхода 2, DomainError и наследники -> код 3.
"""
from __future__ import annotations

__all__ = [
    "FkitError",
    "ParseError",
    "UsageError",
    "DomainError",
    "FieldError",
    "DescriptorMismatch",
    "ZeroDivision",
    "InvalidParameter",
    "NotAnAutomorphism",
    "WrongDimension",
    "DegenerateForm",
    "NotNormalized",
    "NonSplitAlgebra",
    "SimilitudeError",
    "CensusOverflow",
    "exit_code_for",
]


class FkitError(Exception):
    """Базовый класс всех ошибок библиотеки."""


class ParseError(FkitError, ValueError):
    """Некорректный JSON, дескриптор поля или тег алгебры."""


class UsageError(FkitError):
    """Неизвестный набор проверок / пространство / несовместимые флаги."""


class DomainError(FkitError, ValueError):
    """Нарушено математическое предусловие операции."""


class FieldError(DomainError):
    pass


class DescriptorMismatch(DomainError):
    pass


class ZeroDivision(DomainError, ZeroDivisionError):
    pass


class InvalidParameter(DomainError):
    pass


class NotAnAutomorphism(DomainError):
    pass


class WrongDimension(DomainError):
    pass


class DegenerateForm(DomainError):
    pass


class NotNormalized(DomainError):
    pass


class NonSplitAlgebra(DomainError):
    pass


class SimilitudeError(DomainError):
    pass


class CensusOverflow(DomainError):
    pass


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ParseError, UsageError)):
        return 2
    if isinstance(exc, DomainError):
        return 3
    return 1
