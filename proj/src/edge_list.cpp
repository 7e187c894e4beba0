#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qtrack/graph.hpp"

namespace qtrack {

void write_edge_list(std::ostream& out, const WeightedDigraph& g) {
  out << "n " << g.size() << " directed " << (g.directed() ? 1 : 0) << '\n';
  const auto old = out.precision(17);
  for (const auto& l : g.links()) out << l.from << ' ' << l.to << ' ' << l.weight << '\n';
  out.precision(old);
}

WeightedDigraph read_edge_list(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw GraphError("edge list: empty input");
  std::istringstream header(line);
  std::string tag_n, tag_dir;
  int n = 0, directed = -1;
  if (!(header >> tag_n >> n >> tag_dir >> directed) || tag_n != "n" || tag_dir != "directed" ||
      (directed != 0 && directed != 1))
    throw GraphError("edge list: bad header '" + line + "', expected 'n <count> directed <0|1>'");

  std::vector<Link> links;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    Link l;
    std::string extra;
    if (!(row >> l.from >> l.to >> l.weight) || (row >> extra))
      throw GraphError("edge list: malformed line " + std::to_string(line_no) + ": '" + line + "'");
    links.push_back(l);
  }
  return WeightedDigraph(n, directed == 1, std::move(links));
}

}  // namespace qtrack
