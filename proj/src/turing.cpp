#include "consfree/turing.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace consfree {

bool Machine::has_symbol(const std::string& s) const {
  return std::find(symbols.begin(), symbols.end(), s) != symbols.end();
}

bool Machine::has_state(const std::string& s) const {
  return std::find(states.begin(), states.end(), s) != states.end();
}

AnalysisReport validate_machine(const Machine& m) {
  AnalysisReport report;
  auto violation = [&](const std::string& reason) {
    report.violations.push_back({SIZE_MAX, ".", reason});
  };
  for (const char* s : {"0", "1", "_"})
    if (!m.has_symbol(s)) violation(std::string("missing tape symbol ") + s);
  for (const char* s : {"start", "accept", "reject"})
    if (!m.has_state(s)) violation(std::string("missing state ") + s);
  for (size_t i = 0; i < m.transitions.size(); ++i) {
    const Transition& t = m.transitions[i];
    std::string where = "transition " + std::to_string(i);
    if (t.from == "accept" || t.from == "reject")
      violation(where + " leaves the terminal state " + t.from);
    if (!m.has_state(t.from)) violation(where + ": unknown state " + t.from);
    if (!m.has_state(t.to)) violation(where + ": unknown state " + t.to);
    if (!m.has_symbol(t.read))
      violation(where + ": unknown symbol " + t.read);
    if (!m.has_symbol(t.write))
      violation(where + ": unknown symbol " + t.write);
    if (t.dir != 'L' && t.dir != 'R')
      violation(where + ": direction must be L or R");
  }
  return report;
}

IndexedMachine index_options(const Machine& m) {
  IndexedMachine out;
  out.base = m;
  out.fan_out = 1;
  // group rows by (i, r), assign k in a canonical order
  std::map<std::pair<std::string, std::string>, std::vector<Transition>>
      groups;
  for (auto& t : m.transitions) groups[{t.from, t.read}].push_back(t);
  for (auto& [key, ts] : groups) {
    std::sort(ts.begin(), ts.end(), [](const Transition& a,
                                       const Transition& b) {
      return std::tie(a.write, a.dir, a.to) < std::tie(b.write, b.dir, b.to);
    });
    out.fan_out = std::max(out.fan_out, static_cast<int>(ts.size()));
  }
  for (auto& [key, ts] : groups)
    for (size_t k = 0; k < ts.size(); ++k)
      out.rows.push_back({static_cast<int>(k) + 1, ts[k]});
  return out;
}

namespace {

std::string tape_key(const Configuration& c) {
  std::string key = c.state + "@" + std::to_string(c.head) + ":";
  for (auto& [pos, sym] : c.tape)
    if (sym != "_") key += std::to_string(pos) + "=" + sym + ";";
  return key;
}

Configuration initial_configuration(const std::string& word) {
  Configuration c;
  c.state = "start";
  c.head = 0;
  for (size_t i = 0; i < word.size(); ++i)
    c.tape[static_cast<int64_t>(i) + 1] = std::string(1, word[i]);
  return c;
}

std::string read_at(const Configuration& c, int64_t pos) {
  auto it = c.tape.find(pos);
  return it == c.tape.end() ? "_" : it->second;
}

}  // namespace

RunOutcome run_machine(const Machine& m, const std::string& word,
                       uint64_t max_steps) {
  IndexedMachine im = index_options(m);

  struct Node {
    Configuration config;
    uint64_t depth;
    size_t parent;  // index into nodes, SIZE_MAX for root
    int via_row;    // index into im.rows
  };
  std::vector<Node> nodes;
  nodes.push_back({initial_configuration(word), 0, SIZE_MAX, -1});
  std::set<std::string> visited{tape_key(nodes[0].config)};
  std::deque<size_t> frontier{0};

  auto build_witness = [&](size_t leaf) {
    std::vector<int> w;
    for (size_t n = leaf; nodes[n].parent != SIZE_MAX; n = nodes[n].parent)
      w.push_back(nodes[n].via_row);
    std::reverse(w.begin(), w.end());
    return w;
  };

  if (nodes[0].config.state == "accept") return {true, {}};

  while (!frontier.empty()) {
    size_t cur = frontier.front();
    frontier.pop_front();
    const uint64_t depth = nodes[cur].depth;
    if (depth >= max_steps) continue;
    const Configuration snapshot = nodes[cur].config;
    std::string sym = read_at(snapshot, snapshot.head);
    for (size_t ri = 0; ri < im.rows.size(); ++ri) {
      const Transition& t = im.rows[ri].t;
      if (t.from != snapshot.state || t.read != sym) continue;
      Configuration next = snapshot;
      next.tape[next.head] = t.write;
      next.head += t.dir == 'R' ? 1 : -1;
      if (next.head < 0) continue;  // falling off the left end: dead branch
      next.state = t.to;
      if (next.state == "accept") {
        nodes.push_back({next, depth + 1, cur, static_cast<int>(ri)});
        return {true, build_witness(nodes.size() - 1)};
      }
      std::string key = tape_key(next);
      if (!visited.insert(key).second) continue;
      nodes.push_back({std::move(next), depth + 1, cur,
                       static_cast<int>(ri)});
      frontier.push_back(nodes.size() - 1);
    }
  }
  return {false, {}};
}

bool replay_witness(const Machine& m, const std::string& word,
                    const std::vector<int>& witness) {
  IndexedMachine im = index_options(m);
  Configuration c = initial_configuration(word);
  for (int ri : witness) {
    if (ri < 0 || static_cast<size_t>(ri) >= im.rows.size()) return false;
    const Transition& t = im.rows[static_cast<size_t>(ri)].t;
    if (t.from != c.state || t.read != read_at(c, c.head)) return false;
    c.tape[c.head] = t.write;
    c.head += t.dir == 'R' ? 1 : -1;
    if (c.head < 0) return false;
    c.state = t.to;
  }
  return c.state == "accept";
}

// ---------------------------------------------------------------------------

Machine parse_machine(const std::string& text) {
  Machine m;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (size_t h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    std::vector<std::string> words;
    std::string w;
    while (ls >> w) words.push_back(w);
    if (words.empty()) continue;
    if (words[0] == "symbols:") {
      m.symbols.assign(words.begin() + 1, words.end());
    } else if (words[0] == "states:") {
      m.states.assign(words.begin() + 1, words.end());
    } else if (words.size() == 6 && words[2] == "->") {
      Transition t{words[0], words[1], words[3], words[4].empty() ? '?'
                                                                  : words[4][0],
                   words[5]};
      if (words[4].size() != 1)
        throw std::runtime_error("machine file line " +
                                 std::to_string(lineno) +
                                 ": direction must be L or R");
      m.transitions.push_back(std::move(t));
    } else {
      throw std::runtime_error("machine file line " + std::to_string(lineno) +
                               ": expected 'i r -> w d j'");
    }
  }
  return m;
}

std::string show_machine(const Machine& m) {
  std::ostringstream out;
  out << "symbols:";
  for (auto& s : m.symbols) out << " " << s;
  out << "\nstates:";
  for (auto& s : m.states) out << " " << s;
  out << "\n";
  for (auto& t : m.transitions)
    out << t.from << " " << t.read << " -> " << t.write << " " << t.dir << " "
        << t.to << "\n";
  return out.str();
}

}  // namespace consfree
