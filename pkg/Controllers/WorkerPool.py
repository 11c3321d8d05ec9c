import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor

from tqdm import tqdm

log = logging.getLogger(__name__)


class WorkerPool:
    """
    runs independent work units on a bounded executor; results always come
    back in input order, so the output does not depend on the number of jobs
    """

    def __init__(self, jobs=1, description=None):
        self.jobs = max(1, int(jobs))
        self.description = description

    def _progress(self, total):
        return tqdm(total=total, desc=self.description, disable=None, leave=False)

    def map(self, fn, items):
        items = list(items)
        log.debug('%s: %d items on %d jobs', self.description or 'pool', len(items), self.jobs)

        if self.jobs == 1:
            results = []
            with self._progress(len(items)) as bar:
                for item in items:
                    results.append(fn(item))
                    bar.update()
            return results

        return asyncio.run(self._gather(fn, items))

    async def _gather(self, fn, items):
        loop = asyncio.get_running_loop()

        with ThreadPoolExecutor(self.jobs) as executor, self._progress(len(items)) as bar:
            futures = [loop.run_in_executor(executor, fn, item) for item in items]
            for future in futures:
                future.add_done_callback(lambda _: bar.update())
            return list(await asyncio.gather(*futures))
