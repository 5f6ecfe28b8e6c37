from editables.redirector import RedirectingFinder as F
F.install()
F.map_module('prm_weights', '/root/pkg/src/prm_weights/__init__.py')