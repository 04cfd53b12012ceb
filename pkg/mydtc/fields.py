from django import forms
from django.core.validators import MaxValueValidator, MinValueValidator


class CommaListField(forms.Field):
    '''
    Et formfield for kommaseparerte lister, f.eks. "--p 0,0.06". Tar også imot en liste
    eller en enkelt verdi, så defaults kan oppgis som python verdier. Hver verdi sjekkes
    mot min_value og max_value, og feilmeldingen sier hvilken verdi som var feil.
    '''
    itemField = forms.FloatField

    def __init__(self, *args, min_value=None, max_value=None, **kwargs):
        super().__init__(*args, **kwargs)
        self.itemFormField = self.itemField(min_value=min_value, max_value=max_value)

    def to_python(self, value):
        if value in self.empty_values:
            return ()
        if isinstance(value, str):
            value = [v.strip() for v in value.split(',') if v.strip()]
        elif not isinstance(value, (list, tuple)):
            value = [value]
        return tuple(self.itemFormField.clean(v) for v in value)

    def validate(self, value):
        if self.required and not value:
            raise forms.ValidationError(self.error_messages['required'], code='required')

    def prepare_value(self, value):
        if isinstance(value, (list, tuple)):
            return ','.join(str(v) for v in value)
        return value


class FloatListField(CommaListField):
    itemField = forms.FloatField


class IntListField(CommaListField):
    itemField = forms.IntegerField


class Seed64Field(forms.IntegerField):
    'Et IntegerField for 64-bit seeds, altså 0 til 2^64-1'
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.validators.append(MinValueValidator(0))
        self.validators.append(MaxValueValidator(2**64 - 1))
