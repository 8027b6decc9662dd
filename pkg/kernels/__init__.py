# kernels/__init__.py
# Ядра numba для переборов над простым полем F_p.
