"""Figure presets, key = value files read by the command line tool"""
