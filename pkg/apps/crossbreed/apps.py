from django.apps import AppConfig


class CrossbreedConfig(AppConfig):
    name = "apps.crossbreed"
    verbose_name = "杂交方程"
