from dataclasses import dataclass, field, fields

import numpy as np
from django import forms
from django.conf import settings

from mydtc import consts
from mydtc.fields import FloatListField, IntListField, Seed64Field
from mydtc.utils.floquetUtils import DisorderSpec

# Konfigurasjonen til en kjøring. Verdiene kommer fra defaults, så config filen, så flaggan,
# og valideres samlet av RunConfigForm. Feilmeldingene bruker flaggnavnet (eps-min), mens
# python navnan e camelCase (epsMin).

flagTilFelt = {
    'command': 'command',
    'n': 'n',
    'eps': 'eps',
    'eps-min': 'epsMin',
    'eps-max': 'epsMax',
    'eps-points': 'epsPoints',
    'p': 'p',
    'p-min': 'pMin',
    'p-max': 'pMax',
    'p-points': 'pPoints',
    'K': 'K',
    'realizations': 'realizations',
    'j-min': 'jMin',
    'j-max': 'jMax',
    'seed': 'seed',
    'backend': 'backend',
    'trajectories': 'trajectories',
    'batches': 'batches',
    'workers': 'workers',
    'out': 'out',
    'n-list': 'nList',
}

feltTilFlag = {felt: flag for flag, felt in flagTilFelt.items()}

kjøringsInnstillinger = ['workers', 'out']
'Påvirker aldri et resultat, og er derfor ikke med i provenance'

statistikkKommandoer = [consts.Kommando.critical, consts.Kommando.sizeScan, consts.Kommando.heatmap]


def getDefaults():
    return {
        'n': 10,
        'eps': 0.0,
        'epsMin': consts.defaultEpsMin,
        'epsMax': consts.defaultEpsMax,
        'epsPoints': consts.defaultEpsPoints,
        'p': (0.0,),
        'pMin': consts.defaultPMin,
        'pMax': consts.defaultPMax,
        'pPoints': consts.defaultPPoints,
        'K': consts.defaultSteps,
        'realizations': consts.defaultRealizations,
        'jMin': consts.defaultJMin,
        'jMax': consts.defaultJMax,
        'seed': 0,
        'backend': consts.Evolusjon.exact,
        'trajectories': consts.defaultTrajectories,
        'batches': consts.defaultBatches,
        'workers': settings.MYDTC_WORKERS,
        'out': settings.MYDTC_OUTPUT_PREFIX,
        'nList': consts.defaultNList,
    }


class RunConfigForm(forms.Form):
    command = forms.ChoiceField(choices=[(k, k) for k in consts.alleKommandoer])
    n = forms.IntegerField(min_value=1)
    eps = forms.FloatField(min_value=0, max_value=1)
    epsMin = forms.FloatField(min_value=0, max_value=1)
    epsMax = forms.FloatField(min_value=0, max_value=1)
    epsPoints = forms.IntegerField(min_value=1)
    p = FloatListField(min_value=0, max_value=1)
    pMin = forms.FloatField(min_value=0, max_value=1)
    pMax = forms.FloatField(min_value=0, max_value=1)
    pPoints = forms.IntegerField(min_value=1)
    K = forms.IntegerField(min_value=1)
    realizations = forms.IntegerField(min_value=1)
    jMin = forms.FloatField()
    jMax = forms.FloatField()
    seed = Seed64Field()
    backend = forms.ChoiceField(choices=[(b, b) for b in consts.alleEvolusjoner])
    trajectories = forms.IntegerField(min_value=1)
    batches = forms.IntegerField(min_value=1)
    workers = forms.IntegerField(min_value=1)
    out = forms.CharField(max_length=4096)
    nList = IntListField(required=False, min_value=1)

    def clean_K(self):
        K = self.cleaned_data['K']
        if K % 2:
            raise forms.ValidationError(
                'K must be even so that the subharmonic frequency lies on the DFT grid, got %(K)s',
                code='oddK', params={'K': K}
            )
        return K

    def clean(self):
        cleanedData = super().clean()
        command = cleanedData.get('command')

        if command in [consts.Kommando.trace, consts.Kommando.spectrum] and len(cleanedData.get('p', ())) > 1:
            self.add_error('p', forms.ValidationError('%(command)s takes exactly one p', code='manyP', params={'command': command}))

        for low, high, points in [('epsMin', 'epsMax', 'epsPoints'), ('pMin', 'pMax', 'pPoints')]:
            if low in cleanedData and high in cleanedData and cleanedData.get(points, 1) > 1 and not cleanedData[low] < cleanedData[high]:
                self.add_error(high, forms.ValidationError(f'{feltTilFlag[high]} must be larger than {feltTilFlag[low]}', code='emptyGrid'))

        if 'jMin' in cleanedData and 'jMax' in cleanedData and not cleanedData['jMin'] < cleanedData['jMax']:
            self.add_error('jMax', forms.ValidationError('j-max must be larger than j-min', code='emptyInterval'))

        if command in statistikkKommandoer:
            if cleanedData.get('epsPoints', consts.splineMinPoints) < consts.splineMinPoints:
                self.add_error('epsPoints', forms.ValidationError(
                    'The peak spline needs at least %(min)s eps points', code='fewPoints', params={'min': consts.splineMinPoints}
                ))
            if 'realizations' in cleanedData and 'batches' in cleanedData and cleanedData['realizations'] < 2 * cleanedData['batches']:
                self.add_error('realizations', forms.ValidationError(
                    '%(batches)s batches need at least %(min)s realizations', code='fewRealizations',
                    params={'batches': cleanedData['batches'], 'min': 2 * cleanedData['batches']}
                ))

        if command == consts.Kommando.heatmap and cleanedData.get('backend') == consts.Evolusjon.trajectory:
            self.add_error('backend', forms.ValidationError('heatmap only runs with the exact backend', code='heatmapBackend'))

        return cleanedData


@dataclass
class RunConfig:
    command: str
    n: int
    eps: float
    epsMin: float
    epsMax: float
    epsPoints: int
    p: tuple
    pMin: float
    pMax: float
    pPoints: int
    K: int
    realizations: int
    jMin: float
    jMax: float
    seed: int
    backend: str
    trajectories: int
    batches: int
    workers: int
    out: str
    nList: tuple = ()
    overridden: list = field(default_factory=list)
    'Nøklan der et flagg overstyrte config filen'

    @property
    def epsGrid(self):
        'Inklusive endepunkt'
        return np.linspace(self.epsMin, self.epsMax, self.epsPoints)

    @property
    def pGrid(self):
        return np.linspace(self.pMin, self.pMax, self.pPoints)

    @property
    def disorder(self):
        return DisorderSpec(count=self.realizations, low=self.jMin, high=self.jMax, masterSeed=self.seed)

    def toDict(self):
        'Den resolvede konfigurasjonen med flaggnavn, uten kjøringsinnstillingene'
        resolved = {}
        for f in fields(self):
            if f.name in kjøringsInnstillinger or f.name == 'overridden':
                continue
            value = getattr(self, f.name)
            resolved[feltTilFlag[f.name]] = list(value) if isinstance(value, tuple) else value
        return resolved


def readConfigFile(path):
    'Flat key=value fil, # starter en kommentar. Returne en dict med feltnavn.'
    values = {}
    with open(path, encoding='utf-8') as file:
        for lineNumber, line in enumerate(file, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise forms.ValidationError(
                    {'config': [f'Line {lineNumber} of {path} is not key=value']}, code='syntax'
                )
            key, value = (s.strip() for s in line.split('=', 1))
            if key not in flagTilFelt:
                raise forms.ValidationError({key: [f'Unknown config key {key!r}']}, code='unknownKey')
            values[flagTilFelt[key]] = value
    return values


def errorDict(form):
    'form.errors med flaggnavn som nøkler'
    return {feltTilFlag.get(key, key): [str(e) for e in errors] for key, errors in form.errors.items()}


def parseConfig(flags, configPath=None):
    '''
    Resolve konfigurasjonen: defaults, så config filen, så flaggan. flags e en dict med
    feltnavn, der None betyr at flagget ikke ble gitt. Raiser en ValidationError med
    en error_dict keyed på flaggnavnet om noe er ugyldig.
    '''
    unknown = [key for key in flags if key not in feltTilFlag]
    if unknown:
        raise forms.ValidationError({key: [f'Unknown config key {key!r}'] for key in unknown}, code='unknownKey')

    fileValues = readConfigFile(configPath) if configPath else {}
    flagValues = {key: value for key, value in flags.items() if value is not None}

    data = getDefaults()
    data.update(fileValues)
    data.update(flagValues)

    form = RunConfigForm(data=data)
    if not form.is_valid():
        raise forms.ValidationError(errorDict(form))

    cleanedData = dict(form.cleaned_data)
    if not cleanedData['nList']:
        cleanedData['nList'] = (cleanedData['n'],)

    return RunConfig(
        **cleanedData,
        overridden=sorted(feltTilFlag[key] for key in fileValues if key in flagValues)
    )
