"""CLI invocations pinned by golden files (run with tests/ as working directory)."""

CASES = {
    "cartier_apply": ["cartier", "apply", "--field", "gf(2,1,x)", "--form", "t dt", "--prec", "8", "--json"],
    "cartier_inverse": ["cartier", "inverse", "--field", "gf(3,1)", "--form", "(t^-1 + 2 t) dt", "--prec", "12", "--json"],
    "bn_member": ["bn", "member", "--form", "(t^2 + t) dt", "--level", "2", "--prec", "32", "--json"],
    "bn_decompose": ["bn", "decompose", "--field", "gf(3,1)", "--form", "(t^-1 + t^2 + t^8) dt + O(t^30)", "--level", "2", "--json"],
    "witt_add": ["witt", "add", "--a", "1;0", "--b", "1;0", "--json"],
    "witt_mul": ["witt", "mul", "--field", "gf(3,1)", "--a", "t;1", "--b", "t^2;t", "--prec", "16", "--json"],
    "witt_dn": ["witt", "dn", "--a", "t;t^3", "--json"],
    "witt_invert_dn": ["witt", "invert-dn", "--form", "(t^2 + t) dt", "--level", "2", "--json"],
    "brauer_inv": ["brauer", "inv", "--field", "gf(3,1)", "--form", "dlog(t)", "--json"],
    "brauer_inv_f4": ["brauer", "inv", "--field", "gf(2,2,w^2+w+1)", "--form", "dlog(t)*w", "--json"],
    "brauer_solve": ["brauer", "solve-1mc", "--field", "gf(3,1)", "--form", "(t^-4 + 2 t^2) dt + O(t^10)", "--json"],
    "brauer_symbol": ["brauer", "symbol", "--field", "gf(5,1)", "--f", "t^-1", "--g", "t", "--prec", "8", "--json"],
    "brauer_pair": ["brauer", "pair", "--field", "gf(3,1)", "--f", "t", "--g", "t^-1", "--prec", "8", "--json"],
    "global_residues": ["global", "residues", "--field", "gf(2,1)", "--form", "(t^2+1)/(t^3+t^2+1) dt", "--json"],
    "global_check_diag": ["global", "check", "--adelic", "fixtures/adelic_diagonal.json", "--json"],
    "global_check_dev": ["global", "check", "--adelic", "fixtures/adelic_deviating.json", "--mult", "1/(t+1)", "--json"],
    "bm_check_dev": ["bm", "check", "--input", "fixtures/bm_deviating.json", "--json"],
    "bm_check_diag": ["bm", "check", "--input", "fixtures/bm_diagonal.json", "--json"],
    "bm_pair": ["bm", "pair", "--input", "fixtures/bm_deviating.json", "--trials", "2", "--json"],
    "demo_legendre": ["demo", "legendre", "--p", "5", "--json"],
}

# (argv, expected exit code)
FAILURES = [
    (["cartier", "apply", "--form", "t^^2 dt"], 2),
    (["cartier", "apply", "--form", "t"], 2),
    (["cartier", "apply", "--form", "t^3 dt + O(t^5)", "--field", "gf(3,1)"], 1),
    (["witt", "invert-dn", "--form", "dlog(t)", "--level", "2"], 1),
    (["witt", "add", "--a", "1;0;0;0", "--b", "1;0;0;0"], 2),
    (["brauer", "symbol", "--f", "t", "--g", "0"], 1),
    (["global", "check", "--adelic", "fixtures/missing.json"], 2),
    (["cartier", "apply", "--field", "gf(4,1)", "--form", "dt"], 2),
    (["bogus"], 2),
    ([], 2),
]
