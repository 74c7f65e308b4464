import sys
import math


class ProgressBar:

    def __init__(self, total: int, scale: float = 0.5, buf=sys.stderr, header: str = "Training",
                 enabled: bool = True):
        self._total = max(1, total)
        self._finished = not enabled
        self._buffer = buf
        self._header = header
        self._status = ""
        self._last_value = -1
        self._scale = max(0.0, min(1.0, scale))
        self._max = int(math.ceil(100 * self._scale))

    def set_status(self, status: str):
        self._status = status

    def step(self, done: int):
        self.update(100.0 * done / self._total)

    def update(self, percentage: float):
        percentage_int = int(max(0, min(100, percentage)))
        if percentage_int == self._last_value or self._finished:
            return
        width = int(math.ceil(percentage_int * self._scale))
        # compile progress bar
        pbar = f"{self._header}: ["
        pbar += "=" * width
        if width < self._max:
            pbar += ">"
        pbar += " " * max(0, self._max - width - 1)
        pbar += "] {:d}%".format(percentage_int)
        if self._status:
            pbar += f" {self._status}"
        self._buffer.write(pbar)
        self._buffer.flush()
        # return to start of line
        self._buffer.write("\b" * len(pbar) + "\x1b[2K")
        if percentage_int >= 100:
            self._buffer.write("Done!\n")
            self._buffer.flush()
            self._finished = True
        self._last_value = percentage_int

    def done(self):
        self.update(100)
