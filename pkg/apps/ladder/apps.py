from django.apps import AppConfig


class LadderConfig(AppConfig):
    name = "apps.ladder"
    verbose_name = "雅可比阶梯"
