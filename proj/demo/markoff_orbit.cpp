// Orbit of (-3,-3,-3) on the Markoff-type surface S_0, its BQ verdict, and
// the slowest-growing words to depth 6.
#include <algorithm>
#include <iostream>

#include "cubic/cubic.hpp"

int main()
{
    using namespace cubic;
    const Params params = Params::markoff();
    const SurfacePoint p{-3.0, -3.0, -3.0};

    const OrbitResult orbit = orbit_bfs(p, params, 6);
    std::cout << "orbit nodes to depth 6: " << orbit.nodes.size() << "\n";

    std::vector<OrbitNode> nodes = orbit.nodes;
    std::stable_sort(nodes.begin(), nodes.end(),
                     [](const OrbitNode& a, const OrbitNode& b) { return a.min_modulus < b.min_modulus; });
    for (std::size_t i = 0; i < std::min<std::size_t>(5, nodes.size()); ++i)
        std::cout << "  " << (nodes[i].word.empty() ? "(id)" : nodes[i].word.str()) << "  "
                  << io::format_point(nodes[i].point) << "\n";

    const EscapeConfig cfg = validated_config(params, 0.0, 2000, 10);
    const BQVerdict v = bq_test(p, params, 12, default_K(params), cfg);
    std::cout << io::verdict_json(v, params, p, true).dump(2) << "\n";

    const Word g = Word::parse("zyzx");
    std::cout << "zyzx -> " << io::format_matrix(word_to_matrix(g)) << " " << to_string(classify(g)) << "\n";
}
