"""Lazy, unordered parallel map over blocks of Monte Carlo trials.

Each item of the iterable is a tuple ``(key, *args)``. Workers evaluate
``func(*args)`` and send back ``(key, result)``, so the caller can put results
back in order no matter which worker finished first. At most ``procs`` items are
in flight at any time, which keeps memory bounded for large sweeps. An exception
raised inside a worker is shipped back and re-raised in the parent.
"""

from multiprocessing import Process, Queue, cpu_count
from queue import Empty, Full

__all__ = ["pool_imap_unordered", "resolve_jobs"]


class _WorkerFailure(object):
    """Carries an exception raised by a worker back to the parent"""

    def __init__(self, error):
        self.error = error


def resolve_jobs(jobs):
    """Number of worker processes for a requested job count. Values of zero or
    less are counted back from the number of CPUs, as in ``cpu_count() + jobs``

    :param jobs: requested number of jobs
    :returns: a positive integer
    """
    jobs = int(jobs)
    if jobs <= 0:
        jobs = cpu_count() + jobs
    return max(1, jobs)


def _worker(func, inbox, outbox):
    for item in iter(inbox.get, None):
        key, args = item[0], item[1:]
        try:
            outbox.put((key, func(*args)))
        except Exception as error:
            outbox.put((key, _WorkerFailure(error)))


def _unwrap(message):
    key, result = message
    if isinstance(result, _WorkerFailure):
        raise result.error
    return key, result


def pool_imap_unordered(func, iterable, procs=cpu_count()):
    """Lazily maps ``func`` over ``iterable`` with a pool of processes, yielding
    ``(key, func(*args))`` pairs in completion order

    :param func: picklable function to apply to the arguments of each item
    :param iterable: iterable of tuples ``(key, *args)``
    :param procs: number of worker processes. Defaults to the cpu count
    :yields: ``(key, result)`` pairs
    """
    inbox = Queue(procs)
    outbox = Queue()
    workers = [Process(target=_worker, args=(func, inbox, outbox), daemon=True)
               for _ in range(procs)]
    for process in workers:
        process.start()

    sent = 0
    received = 0
    try:
        for item in iterable:
            while True:
                try:
                    inbox.put(item, True, 0.1)
                    sent += 1
                    break
                except Full:
                    # drain finished blocks while the workers are busy
                    while True:
                        try:
                            message = outbox.get(False)
                        except Empty:
                            break
                        received += 1
                        yield _unwrap(message)

        while received < sent:
            message = outbox.get()
            received += 1
            yield _unwrap(message)
    finally:
        for _ in workers:
            try:
                inbox.put(None, True, 1.0)
            except Full:
                break
        for process in workers:
            process.join(timeout=1.0)
            if process.is_alive():
                process.terminate()
