from typing import Union, Optional, List


class HSKException(RuntimeError):

    exit_code: int = 1

    def __init__(self, msg: str):
        super(RuntimeError, self).__init__(msg)


class HSKConfigException(HSKException):

    exit_code = 2

    def __init__(self, path: Optional[str], reason: Union[str, BaseException]):
        where = f"The configuration file `{path}`" if path else "The configuration"
        super(HSKConfigException, self).__init__(f"{where} is not valid. Reason: {str(reason)}")


class HSKDataException(HSKException):

    exit_code = 3

    def __init__(self, reason: Union[str, BaseException]):
        super(HSKDataException, self).__init__(f"Invalid data. {str(reason)}")


class HSKMalformedRowException(HSKDataException):

    def __init__(self, path: str, line: int, reason: str):
        super(HSKMalformedRowException, self).__init__(
            f"The file `{path}` contains a malformed row at line {line}. Reason: {reason}")


class HSKEmbeddingFileException(HSKDataException):

    def __init__(self, path: str, line: Optional[int], reason: str):
        where = f" at line {line}" if line is not None else ""
        super(HSKEmbeddingFileException, self).__init__(
            f"The embedding file `{path}` could not be loaded{where}. Reason: {reason}")


class HSKCheckpointException(HSKException):

    exit_code = 3

    def __init__(self, path: Optional[str], reason: str):
        where = f" `{path}`" if path else ""
        super(HSKCheckpointException, self).__init__(
            f"The checkpoint{where} could not be read. Reason: {reason}")


class HSKNumericalException(HSKException):

    exit_code = 4

    def __init__(self, reason: str):
        super(HSKNumericalException, self).__init__(f"Numerical failure. {reason}")


class HSKShapeException(HSKException):

    def __init__(self, reason: str):
        super(HSKShapeException, self).__init__(f"Dimension mismatch. {reason}")


class HSKTaskTableMismatchException(HSKException):

    exit_code = 2

    def __init__(self, expected: List[str], given: List[str], reason: Optional[str] = None):
        super(HSKTaskTableMismatchException, self).__init__(
            f"The checkpoint was trained on the tasks [{', '.join(expected)}] but the data "
            f"describes the tasks [{', '.join(given)}]." + (f" {reason}" if reason else ""))
