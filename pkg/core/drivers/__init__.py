from core.drivers.pool_driver import PoolScanDriver
from core.drivers.serial_driver import SerialScanDriver

SCAN_DRIVERS = {
    "serial": SerialScanDriver,
    "pool": PoolScanDriver,
}
