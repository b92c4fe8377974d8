#include "p2dyn/builtin_maps.hpp"

#include <filesystem>

namespace p2dyn {

namespace {

std::array<std::vector<cplx>, 3> empty_tables(int d) {
    const std::size_t n = static_cast<std::size_t>((d + 1) * (d + 2) / 2);
    return {std::vector<cplx>(n), std::vector<cplx>(n), std::vector<cplx>(n)};
}

int table_index(int d, int i, int j) {
    int off = 0;
    for (int a = 0; a < i; ++a) off += d + 1 - a;
    return off + j;
}

}  // namespace

HomPolyMap power_map(int degree) {
    auto tabs = empty_tables(degree);
    tabs[0][table_index(degree, degree, 0)] = 1.0;  // z^d
    tabs[1][table_index(degree, 0, degree)] = 1.0;  // w^d
    tabs[2][table_index(degree, 0, 0)] = 1.0;       // t^d
    return HomPolyMap(degree, std::move(tabs), true,
                      "power" + std::to_string(degree));
}

HomPolyMap lattes4_suspension() {
    const int d = 4;
    auto tabs = empty_tables(d);
    // P = z^4 + 2 z^2 w^2 + w^4
    tabs[0][table_index(d, 4, 0)] = 1.0;
    tabs[0][table_index(d, 2, 2)] = 2.0;
    tabs[0][table_index(d, 0, 4)] = 1.0;
    // Q = 4 z^3 w - 4 z w^3
    tabs[1][table_index(d, 3, 1)] = 4.0;
    tabs[1][table_index(d, 1, 3)] = -4.0;
    // t^4
    tabs[2][table_index(d, 0, 0)] = 1.0;
    return HomPolyMap(d, std::move(tabs), true, "lattes4susp");
}

HomPolyMap resolve_map(const std::string& name_or_path) {
    if (name_or_path == "power2") return power_map(2);
    if (name_or_path == "power4") return power_map(4);
    if (name_or_path == "lattes4susp") return lattes4_suspension();
    if (name_or_path == "lattes4")
        throw ConfigError(
            "lattes4 is the one-dimensional base map; use lattes4susp");
    if (!std::filesystem::exists(name_or_path))
        throw ConfigError("unknown map name and no such file: " + name_or_path);
    return load_map_file(name_or_path);
}

std::vector<std::string> builtin_map_names() {
    return {"power2", "power4", "lattes4susp"};
}

}  // namespace p2dyn
