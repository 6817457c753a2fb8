// SPDX-License-Identifier: Apache-2.0
//
// Builds the height-4 sticky map from its leaf table, prints the image of
// every vertex and writes K_sigma on 0 <= x <= 1 as an SVG.
//
//   table_one [out.svg]

#include <iostream>
#include <map>
#include <memory>
#include <string>

#include "kakeya/kset.hpp"
#include "kakeya/measure.hpp"
#include "kakeya/sticky.hpp"
#include "kakeya/svg.hpp"

using namespace kakeya;

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : "table_one.svg";

    // leaf of the full tree -> leaf of the target, both without the root bit
    const std::pair<const char*, const char*> rows[] = {
        {"0000", "1100"}, {"0001", "1101"}, {"0010", "1110"}, {"0011", "1111"},
        {"0100", "1011"}, {"0101", "1010"}, {"0110", "1010"}, {"0111", "1010"},
        {"1000", "0000"}, {"1001", "0001"}, {"1010", "0011"}, {"1011", "0010"},
        {"1100", "0100"}, {"1101", "0100"}, {"1110", "0101"}, {"1111", "0100"},
    };
    std::map<BitString, BitString> leaves;
    for (const auto& [t, s] : rows) leaves.emplace(BitString(std::string("0") + t), BitString(std::string("0") + s));

    try {
        const auto tree = std::make_shared<const DirTree>(DirTree::full(4));
        const StickyMap sigma = validate(extend_leaf_images(leaves), tree);
        std::cout << sigma.to_text();

        const KSet k = build_kset(sigma);
        const Rational area = strip_measure_exact(k, Dyadic(0), Dyadic(1));
        std::cout << k.size() << " parallelograms, |K| on [0,1] = " << area.to_string() << " ~ " << area.to_double()
                  << '\n';

        SvgStyle style;
        style.comment = "sticky map of height 4 from its leaf table";
        render_svg(k, Dyadic(0), Dyadic(1), path, style);
        std::cout << "wrote " << path << '\n';
    } catch (const std::exception& e) {
        std::cerr << "table_one: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
