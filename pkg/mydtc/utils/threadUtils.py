import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

logger = logging.getLogger(__name__)


def logException(func, taskIndex=None, errors=None):
    '''
    Decorator som logge tracebacken og indeksen til tasken om den feiler, og raiser videre.
    errors e en np.geterr() dict som tasken kjøres under. numpy sin errstate e per thread,
    så uten denne ser ikke workers det kalleren har satt.
    '''
    @functools.wraps(func)
    def _decorator(*args, **kwargs):
        try:
            with np.errstate(**(errors or np.geterr())):
                return func(*args, **kwargs)
        except Exception:
            logger.exception(f'Task {taskIndex} ({func.__name__}) failed')
            raise
    return _decorator


def progressGenerator(results, total, label):
    'Generere resultatan videre, og logge prosent av gjennomgang for hver tiende prosent.'
    step = max(1, math.ceil(total / 10))
    for i, result in enumerate(results):
        yield result
        if (i + 1) % step == 0 or i + 1 == total:
            logger.info(f'{label}: {math.floor((i + 1) / total * 100)}%')


def mapTasks(func, tasks, workers=1, label='tasks'):
    '''
    Kjøre func på hver task og returne resultatan i task-rekkefølge, uansett hvilken
    worker som ble ferdig først. Hver task må ha sin egen tilstand og sin egen random
    stream, da blir resultatet det samme for alle worker antall.

    workers=1 kjøre alt i denne threaden. Ellers brukes en ThreadPoolExecutor. numpy
    slipper GIL under de store array operasjonene, så density backenden skalere greit.
    Tasks arver kalleren sin np.errstate i begge tilfeller.
    '''
    tasks = list(tasks)
    if not tasks:
        return []

    errors = np.geterr()
    if workers <= 1:
        return list(progressGenerator(
            (logException(func, i, errors)(task) for i, task in enumerate(tasks)),
            len(tasks), label
        ))

    executor = ThreadPoolExecutor(max_workers=workers, thread_name_prefix='mydtc')
    try:
        futures = [executor.submit(logException(func, i, errors), task) for i, task in enumerate(tasks)]
        results = list(progressGenerator((future.result() for future in futures), len(tasks), label))
    except BaseException:
        # Tasks som ikke har starta kanselleres. De som kjøre må bli ferdig før vi raiser,
        # ellers kan de fortsatt regne når kalleren har sletta output filene.
        executor.shutdown(wait=True, cancel_futures=True)
        raise
    executor.shutdown()
    return results
