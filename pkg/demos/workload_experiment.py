"""Reruns the data-entry experiment on the bundled legislation knowledge base.

A robot fills in a 27-symbol environment twice: once entering everything up
front (traditional), once guided by relevance until the solution is definite.

Run with: python demos/workload_experiment.py [instances] [seed]
"""

import sys

from mxassist import load_legislation_kb
from mxassist.simulate import SimulationConfig, mean_entries, run_simulation


def main():
    instances = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 7
    kb = load_legislation_kb()

    trad = run_simulation(SimulationConfig(kb, instances, seed, "traditional"))
    guided = run_simulation(SimulationConfig(kb, instances, seed, "guided"))

    print("instance  traditional  guided  retractions")
    for t, g in zip(trad, guided):
        print("sale-%-4d %-12d %-7d %d" % (t.instance, t.entries, g.entries, g.retractions))
    mt, mg = mean_entries(trad), mean_entries(guided)
    print("average   %-12.2f %-7.2f" % (mt, mg))
    print("gain      %+.2f entries (%+.0f%%)" % (mg - mt, 100.0 * (mg - mt) / mt))


if __name__ == "__main__":
    main()
