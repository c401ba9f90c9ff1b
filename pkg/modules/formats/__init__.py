"""File formats: points CSV, PPM/PNG images, reports and charts"""
