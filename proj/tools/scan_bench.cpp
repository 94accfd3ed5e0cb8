// Times the verifier scans serially and under OpenMP on a fixed workload
// and prints one row per job count.  The serial path is the reference the
// unit tests compare against; this tool shows what the parallel path buys
// on multi-core hosts.  The workload weights the scan itself: a small
// exhaustive floor plus a large block of sampled models.

#include <cstdio>
#include <cstdlib>
#include <thread>

#include "modchar/characterize.hpp"
#include "modchar/oracle.hpp"

using namespace modchar;

int main(int argc, char** argv) {
    int max_jobs = argc > 1 ? std::atoi(argv[1]) : 8;
    PropSignature sig{{"p", "q"}};
    std::printf("hardware threads: %u\n", std::thread::hardware_concurrency());

    const char* workloads[] = {"[](p | q)", "[]p & <>q", "<>(p & q) | []q"};

    std::printf("%-18s %6s %12s %12s %8s\n", "workload", "jobs", "duality[s]", "unique[s]",
                "speedup");
    for (const char* text : workloads) {
        Formula f = parse_formula(text, sig);
        Characterization c = characterize(f, sig);
        DualityBounds db;
        db.exhaustive_states = 2;
        db.sample_count = 4000;
        db.sample_min_states = 5;
        db.sample_max_states = 7;
        UniqueBounds ub;
        ub.max_depth = 2;
        ub.max_size = 7;

        double serial_total = 0;
        for (int jobs = 1; jobs <= max_jobs; jobs *= 2) {
            VerificationReport duality = verify_duality(f, c, db, jobs);
            VerificationReport unique = verify_unique(f, c, ub, jobs);
            if (!duality.pass || !unique.pass) {
                std::fprintf(stderr, "verification failed during benchmark\n");
                return 1;
            }
            double total = duality.elapsed_seconds + unique.elapsed_seconds;
            if (jobs == 1) serial_total = total;
            std::printf("%-18s %6d %12.3f %12.3f %7.2fx\n", text, jobs,
                        duality.elapsed_seconds, unique.elapsed_seconds,
                        serial_total / total);
        }
    }
    return 0;
}
