// Renders the coordinate net of an equilateral-triangle system to SVG.

#include <fstream>
#include <iostream>

#include "polyell/render.hpp"

int main() {
    using namespace polyell;
    const auto cfg = parse_config_text(R"({"f": [1.3, 1.3, 1.3]})");
    const auto table = SectorTable::build(cfg.polygon());
    std::ofstream out("equilateral_net.svg");
    out << net_to_svg(net_curves(table, cfg));
    std::cout << "wrote equilateral_net.svg\n";
    return 0;
}
