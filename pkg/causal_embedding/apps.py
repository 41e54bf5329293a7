from django.apps import AppConfig


class CausalEmbeddingConfig(AppConfig):
    name = 'causal_embedding'
