# Experiment run tracking
