"""
fading-limits - Core Module

Channel statistics, rate strategies and the three engines that evaluate
the outage metrics:

- analytic: closed forms for single-block and ergodic sessions
- multiblock: lattice convolution for sessions spanning several blocks
- montecarlo: seeded simulation, the oracle for both
"""
