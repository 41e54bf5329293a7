from django.apps import AppConfig


class RecsysWorkspaceConfig(AppConfig):
    name = 'recsys_workspace'
    verbose_name = 'Run registry'
