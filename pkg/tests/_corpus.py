"""Config corpus for the command-line tests: (name, argv, expected exit code)."""

CORPUS = [
    ("criteria-cert", ["criteria", "d=1", "p0=1", "p1=2"], 0),
    ("criteria-witness", ["criteria", "d=1", "p0=4", "p1=4"], 1),
    ("criteria-boundary", ["criteria", "d=1", "p0=3", "p1=3/2"], 2),
    ("criteria-d2-full", ["criteria", "d=2", "p0=1", "pd=2", "p.11=4/3", "gamma=11/10", "radial=1,2,2", "smooth=true"], 0),
    ("criteria-csv", ["criteria", "d=3", "p0=1", "pd=3", "--csv"], 0),
    ("region-dim1", ["region", "rule=thm4.1", "p=1..4:1/2", "q=1..4:1/2"], 0),
    ("region-213b-json", ["region", "rule=thm213b", "d=2", "r=2", "p=1..3", "q=1..3", "--json"], 0),
    ("region-empty", ["region", "rule=thm1", "p=", "q=2"], 0),
    ("bernstein-gauss", ["bernstein", "function=gaussian", "N=4097", "scales=-10..8"], 0),
    ("bernstein-hat2", ["bernstein", "function=hat_nd", "d=2", "N=129", "scales=-3..5", "--csv"], 0),
    ("hardy-check", ["hardy", "check", "function=hat", "N=2001", "q=2", "Q=4", "h=0.5"], 0),
    ("hardy-lemma", ["hardy", "lemma-star", "function=hat", "q=2", "h=0.5"], 0),
    ("hardy-constant", ["hardy", "constant", "trials=20", "levels=4", "--seed", "7"], 0),
    ("hardy-constant-csv", ["hardy", "constant", "trials=5", "h=0.5,1", "--seed", "99", "--csv"], 0),
    ("gallery-info", ["gallery", "info", "function=m:alpha=2,beta=5/2", "d=2"], 0),
    ("gallery-counterexample", ["gallery", "counterexample", "p=4", "q=4"], 0),
    ("gallery-exponents", ["gallery", "exponents", "function=m:alpha=2,beta=6/5"], 0),
    ("norms", ["norms", "function=gaussian", "N=2049", "p=1,2,inf", "eta=1"], 0),
    ("anorm-gauss", ["anorm", "function=gaussian", "R=8,16,32", "spacing=0.0625"], 0),
    ("anorm-m", ["anorm", "function=m:alpha=2,beta=0.8"], 1),
]
