from django.apps import AppConfig


class LevelsetConfig(AppConfig):
    name = "apps.levelset"
    verbose_name = "水平集"
