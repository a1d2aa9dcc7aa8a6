# This file initializes the config module.