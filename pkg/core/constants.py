# =============================================================================
# Port Geometry (Port Hedland)
# =============================================================================

PORT_CENTER_LAT = -20.31
PORT_CENTER_LON = 118.57

# Mean Earth radius used by the haversine distance
EARTH_RADIUS_KM = 6371.0

# =============================================================================
# Geofence & Speed Thresholds
# =============================================================================

DEFAULT_R_FRAME_DEG = 0.5  # coarse sampling-frame circle, in degrees
DEFAULT_R_PORT_KM = 60.0
DEFAULT_R_BERTH_KM = 3.0

DEFAULT_V_STOP_KN = 2.0
DEFAULT_V_GO_KN = 8.0

# Plausible speed range; records outside are dropped during cleaning
MIN_VALID_SOG_KN = 0.0
MAX_VALID_SOG_KN = 40.0

# =============================================================================
# Episode & Calibration Thresholds (hours)
# =============================================================================

DEFAULT_MIN_STOP_HOURS = 6.0
DEFAULT_BERTH_MIN_HOURS = 3.0
DEFAULT_BERTH_MAX_HOURS = 500.0
DEFAULT_MIN_INTERVAL_HOURS = 0.1
DEFAULT_TRIM = 0.10
DEFAULT_GAP_BREAK_HOURS = 12.0
DEFAULT_MIN_CALIBRATION_EVENTS = 10

# =============================================================================
# Game Tolerances (hours)
# =============================================================================

DEFAULT_EPS_TIE = 1e-9
DEFAULT_EPS_GREEN = 1e-6
DEFAULT_EPS_PROBE = 1e-6

# Largest tie block whose orders may be enumerated explicitly (8! orders)
DEFAULT_ENUMERATION_CAP = 8

# =============================================================================
# Monte Carlo
# =============================================================================

DEFAULT_SEED = 20240101
DEFAULT_SAMPLES = 100_000
# Fixed batch size keeps estimates independent of how batches are scheduled
MC_BATCH_SIZE = 20_000
CONFIDENCE_Z_95 = 1.959963984540054

DEFAULT_SIM_PLAYERS = (2, 3, 4)
DEFAULT_SIM_GAMMAS = (0.05, 0.1, 0.5)
DEFAULT_SIM_SHIFTS = (0.05, 0.1, 0.2)

# =============================================================================
# Reports
# =============================================================================

DEFAULT_SLACK_BIN_HOURS = 0.5
DEFAULT_WAITING_BIN_HOURS = 12.0
DEFAULT_SERVICE_BIN_HOURS = 6.0

DEFAULT_ALLOWED_SHIP_TYPES = ("bulk carrier",)

AIS_COLUMNS = ("vessel_id", "timestamp", "lat", "lon", "sog")
METADATA_COLUMNS = ("vessel_id", "ship_type")

VOYAGES_FILE = "voyages.csv"
CALIBRATION_FILE = "calibration.json"
SLACK_FILE = "slack.csv"
SUMMARY_FILE = "summary.json"
HISTOGRAM_DIR = "histograms"
MANIFEST_FILE = "run-manifest.json"
EQUILIBRIUM_FILE = "equilibrium.json"
INTERVALS_FILE = "intervals.csv"
SCHEDULE_FILE = "schedule.csv"
DEVIATION_FILE = "deviation_gains.csv"
SCAN_FILE = "best_response.csv"

# =============================================================================
# Logging Defaults
# =============================================================================

DEFAULT_LOG_LEVEL = "INFO"
DEFAULT_LOG_FILE = ""
DEFAULT_LOG_FORMAT = "text"
DEFAULT_LOG_MAX_BYTES = 10 * 1024 * 1024  # 10MB
DEFAULT_LOG_BACKUP_COUNT = 5
