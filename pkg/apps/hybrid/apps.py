from django.apps import AppConfig


class HybridConfig(AppConfig):
    name = "apps.hybrid"
    verbose_name = "混合公式"
