import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'mydtc.settings')
django.setup()
