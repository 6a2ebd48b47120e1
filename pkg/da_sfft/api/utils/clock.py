import time


class Clock:
    # Monotonic seconds, used for stage runtimes
    def seconds(self) -> float:
        return time.perf_counter()

    def elapsed(self, start: float) -> float:
        return self.seconds() - start
