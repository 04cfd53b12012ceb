from django.apps import AppConfig

class MydtcConfig(AppConfig):
    name = 'mydtc'
    verbose_name = 'MyDTC'
