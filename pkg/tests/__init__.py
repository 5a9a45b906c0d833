"""Test suite for the ptcoupler-hom simulator"""
