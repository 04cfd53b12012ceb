import csv
import json
import logging
import math
from pathlib import Path

import numpy as np

from mydtc import consts

logger = logging.getLogger(__name__)


def formatFloat(value):
    'Alle flyttall skrives med 12 signifikante siffer, så filene blir like på alle plattformer'
    return format(float(value), consts.floatFormat)


def formatCell(value):
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return formatFloat(value)
    return str(value)


def jsonSafe(value):
    'Gjør numpy typer om til python typer, og runder flyttall til 12 signifikante siffer. inf og nan blir null.'
    if isinstance(value, dict):
        return {str(k): jsonSafe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonSafe(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            return None
        return float(formatFloat(value))
    return value


class OutputFiles:
    '''
    Filene en kjøring skriver, <prefix>.<suffix>. Holder styr på hva som er skrevet,
    så removeAll kan slette alt om kjøringen feiler.
    '''

    def __init__(self, prefix):
        self.prefix = str(prefix)
        self.written = []

    def path(self, suffix):
        return Path(f'{self.prefix}.{suffix}')

    def _open(self, suffix):
        path = self.path(suffix)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(path)
        return open(path, 'w', encoding='utf-8', newline='')

    def writeCsv(self, suffix, header, rows):
        with self._open(suffix) as file:
            writer = csv.writer(file, lineterminator='\n')
            writer.writerow(header)
            for row in rows:
                writer.writerow([formatCell(cell) for cell in row])
        logger.info(f'Wrote {self.path(suffix)}')
        return self.path(suffix)

    def writeJson(self, suffix, content):
        with self._open(suffix) as file:
            json.dump(jsonSafe(content), file, indent=4, ensure_ascii=False)
            file.write('\n')
        logger.info(f'Wrote {self.path(suffix)}')
        return self.path(suffix)

    def removeAll(self):
        for path in self.written:
            path.unlink(missing_ok=True)
            logger.warning(f'Removed partial output {path}')
        self.written = []
