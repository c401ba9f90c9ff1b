"""QuasiSample library modules"""
