import os
from dotenv import load_dotenv

# Cargar variables de entorno desde archivo .env
load_dotenv()

# Configuración general de la herramienta
SETTINGS = {
    'log_level': os.getenv('SYZFORMS_LOG_LEVEL', 'INFO'),
    'log_file': os.getenv('SYZFORMS_LOG_FILE', ''),
    'order': os.getenv('SYZFORMS_ORDER', 'degrevlex'),
    'config_path': os.getenv('SYZFORMS_CONFIG', 'config.json')
}

# Directorio con los ideales de los ejemplos
DATA_DIR = os.getenv('SYZFORMS_DATA_DIR', os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data'))
