"""
CLI module for fockflow
"""
