import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'natural_pwm.settings.base')
django.setup()
