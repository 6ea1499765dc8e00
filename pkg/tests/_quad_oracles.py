"""Quadrature fixed points at 4x resolution; see scripts/gen_quad_oracles.py."""
I1_FIXED = complex(5.468745562811e-01, -2.925553519343e-01)
I2_FIXED = complex(6.251735882627e-01, -2.387940927505e-01)
