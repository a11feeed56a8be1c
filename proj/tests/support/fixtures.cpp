#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fixtures {

FormSchema company_schema() {
  std::vector<FieldSpec> fields{
      {"Company name", FieldKind::Textual, true, false, 1, std::nullopt, {}},
      {"Monthly revenue", FieldKind::Numerical, true, false, 2, std::nullopt, {}},
      {"Company type", FieldKind::Categorical, true, false, 3, "profile", {"Large enterprise", "SME", "NPO", "Startup"}},
      {"Field of activity", FieldKind::Categorical, true, false, 4, "profile",
       {"Charity", "Education", "Manufacturing", "Real estate", "Retail"}},
      {"Tax ID", FieldKind::Textual, true, true, 5, std::nullopt, {}},
  };
  return FormSchema(std::move(fields), {});
}

MeaninglessDictionary company_dictionary() { return {"n/a", "@", "$", "-", "none"}; }

Dataset toy_dataset() {
  std::istringstream in(
      "Company name,Monthly revenue,Company type,Field of activity,Tax ID,submitted_at\n"
      "UCI,20,Large enterprise,Real estate,T190,20180101194321\n"
      "KDL,21,Large enterprise,Manufacturing,T201,20180102101500\n"
      "EoP,@,Large enterprise,Manufacturing,T200,20180103120000\n"
      "UNI,39,NPO,Education,n/a,20180104083000\n"
      "JBL,21,NPO,Charity,t211,20180105091000\n"
      "MBC,39,NPO,Education,t200,20180106160000\n");
  return parse_instances(in, company_schema());
}

bn::BayesNet textbook_net() {
  bn::Dag dag({"Company type", "Revenue", "Tax ID"});
  dag.add_edge(0, 1);
  dag.add_edge(0, 2);
  dag.add_edge(1, 2);
  const std::vector<std::string> rq{"required", "optional"};
  std::vector<bn::Cpt> cpts{
      {2, {0.2, 0.8}},
      {2, {0.4, 0.6, 0.1, 0.9}},
      // rows: (a,b) (a,~b) (~a,b) (~a,~b)
      {2, {0.9, 0.1, 0.4, 0.6, 0.4, 0.6, 0.1, 0.9}},
  };
  return bn::BayesNet(std::move(dag), {rq, rq, rq}, std::move(cpts));
}

bn::DiscreteData textbook_counts() {
  bn::DiscreteData d;
  d.names = {"Company type", "Revenue", "Tax ID"};
  d.states.assign(3, {"required", "optional"});
  d.columns.assign(3, {});
  const auto put = [&](int a, int b, int c, int n) {
    for (int i = 0; i < n; ++i) {
      d.columns[0].push_back(a);
      d.columns[1].push_back(b);
      d.columns[2].push_back(c);
    }
  };
  put(0, 0, 0, 72);
  put(0, 0, 1, 8);
  put(0, 1, 0, 48);
  put(0, 1, 1, 72);
  put(1, 0, 0, 32);
  put(1, 0, 1, 48);
  put(1, 1, 0, 72);
  put(1, 1, 1, 648);
  return d;
}

double ScriptedRandom::uniform01() {
  if (uniforms_.empty()) throw std::logic_error("scripted uniform draws exhausted");
  const double v = uniforms_.front();
  uniforms_.pop_front();
  return v;
}

std::size_t ScriptedRandom::index(std::size_t n) {
  if (indices_.empty()) throw std::logic_error("scripted index draws exhausted");
  const auto v = indices_.front();
  indices_.pop_front();
  if (v >= n) throw std::logic_error("scripted index out of range");
  return v;
}

namespace {

std::string stamp(std::size_t i) {
  // Minutes after 2018-01-01 00:00, written as YYYYMMDDhhmmss with a
  // simplified 28-day month so every stamp is valid and increasing.
  const std::size_t minute = i % 60, hour = (i / 60) % 24, day = (i / 1440) % 28 + 1, month = (i / 40320) % 12 + 1,
                    year = 2018 + i / 483840;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04zu%02zu%02zu%02zu%02zu00", year, month, day, hour, minute);
  return buf;
}

template <class T>
const T& pick(const std::vector<T>& v, Mt64Source& rng) {
  return v[rng.index(v.size())];
}

std::size_t weighted(const std::vector<double>& w, Mt64Source& rng) {
  double u = rng.uniform01() * std::accumulate(w.begin(), w.end(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (u < w[i]) return i;
    u -= w[i];
  }
  return w.size() - 1;
}

}  // namespace

bool planted_rule(const RawInstance& inst) {
  const auto& type = inst.values[2];
  const auto& activity = inst.values[3];
  return type && *type == "NPO" && activity && (*activity == "Charity" || *activity == "Education");
}

Dataset planted_dataset(const PlantedOptions& opt) {
  Dataset data;
  data.schema = company_schema();
  Mt64Source rng(opt.seed);
  const std::vector<std::string> types{"Large enterprise", "SME", "NPO", "Startup"};
  const std::vector<std::string> activities{"Charity", "Education", "Manufacturing", "Real estate", "Retail"};
  const std::vector<std::string> placeholders{"n/a", "@", "$", ""};
  for (std::size_t i = 0; i < opt.rows; ++i) {
    RawInstance inst;
    const auto type = weighted({0.25, 0.2, 0.4, 0.15}, rng);
    const auto activity = type == 2 ? weighted({0.3, 0.3, 0.4 / 3, 0.4 / 3, 0.4 / 3}, rng) : rng.index(5);
    const double scale[] = {200.0, 50.0, 30.0, 20.0};
    const auto revenue = static_cast<long>(std::floor(rng.uniform01() * scale[type])) + 1;
    inst.values.push_back("C" + std::to_string(i));
    inst.values.push_back(std::to_string(revenue));
    inst.values.push_back(types[type]);
    inst.values.push_back(activities[activity]);
    bool meaningless = type == 2 && activity < 2;
    if (rng.uniform01() < opt.noise) meaningless = rng.uniform01() < 0.5;
    if (meaningless) {
      const auto& p = pick(placeholders, rng);
      inst.values.push_back(p.empty() ? std::optional<std::string>() : std::optional<std::string>(p));
    } else {
      inst.values.push_back("T" + std::to_string(100000 + rng.index(900000)));
    }
    inst.submitted_at = Timestamp(stamp(i));
    data.instances.push_back(std::move(inst));
  }
  return data;
}

Dataset wide_dataset(std::size_t fields, std::size_t rows, std::uint64_t seed) {
  Mt64Source rng(seed);
  std::vector<FieldSpec> specs;
  for (std::size_t f = 0; f < fields; ++f) {
    FieldSpec s;
    s.name = "f" + std::to_string(f + 1);
    s.tab_index = static_cast<int>(f + 1);
    s.required = true;
    switch (f % 3) {
      case 0: s.kind = FieldKind::Categorical; s.categories = {"a", "b", "c", "d"}; break;
      case 1: s.kind = FieldKind::Numerical; break;
      default: s.kind = FieldKind::Textual; break;
    }
    specs.push_back(std::move(s));
  }
  Dataset data;
  data.schema = FormSchema(specs, {});
  for (std::size_t i = 0; i < rows; ++i) {
    RawInstance inst;
    std::string driver;
    for (std::size_t f = 0; f < fields; ++f) {
      switch (f % 3) {
        case 0:
          driver = std::string(1, static_cast<char>('a' + rng.index(4)));
          inst.values.push_back(driver);
          break;
        case 1:
          inst.values.push_back(std::to_string(rng.index(100) + (driver == "a" ? 100 : 0)));
          break;
        default: {
          const bool empty = driver == "a" ? rng.uniform01() < 0.9 : rng.uniform01() < 0.05;
          inst.values.push_back(empty ? std::optional<std::string>() : std::optional<std::string>("x"));
        }
      }
    }
    inst.submitted_at = Timestamp(stamp(i));
    data.instances.push_back(std::move(inst));
  }
  return data;
}

bn::BayesNet random_net(std::uint64_t seed, std::size_t max_nodes, std::size_t max_states) {
  Mt64Source rng(seed);
  const std::size_t n = 1 + rng.index(max_nodes);
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> states;
  for (std::size_t v = 0; v < n; ++v) {
    names.push_back("v" + std::to_string(v));
    std::vector<std::string> s;
    const std::size_t r = 2 + rng.index(max_states - 1);
    for (std::size_t k = 0; k < r; ++k) s.push_back("s" + std::to_string(k));
    states.push_back(std::move(s));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
  bn::Dag dag(names);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (dag.parents(order[j]).size() < 3 && rng.uniform01() < 0.5) dag.add_edge(order[i], order[j]);

  std::vector<bn::Cpt> cpts;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t rows = 1;
    for (auto p : dag.parents(v)) rows *= states[p].size();
    const std::size_t r = states[v].size();
    bn::Cpt cpt{r, {}};
    for (std::size_t row = 0; row < rows; ++row) {
      std::vector<double> w(r);
      double total = 0.0;
      for (auto& x : w) {
        x = rng.uniform01() < 0.1 ? 0.0 : rng.uniform01();
        total += x;
      }
      if (total == 0.0) {
        w[0] = 1.0;
        total = 1.0;
      }
      for (auto x : w) cpt.table.push_back(x / total);
    }
    cpts.push_back(std::move(cpt));
  }
  return bn::BayesNet(std::move(dag), std::move(states), std::move(cpts));
}

bn::Evidence random_evidence(const bn::BayesNet& net, std::size_t query, Mt64Source& rng) {
  bn::Evidence ev;
  for (std::size_t v = 0; v < net.size(); ++v)
    if (v != query && rng.uniform01() < 0.4) ev[v] = rng.index(net.cardinality(v));
  return ev;
}

namespace {

double entropy_of(const std::vector<LabeledValue>& v) {
  if (v.empty()) return 0.0;
  double n1 = 0.0;
  for (const auto& x : v) n1 += x.label == BinaryClass::Optional;
  const double n = static_cast<double>(v.size());
  double h = 0.0;
  for (double c : {n1, n - n1})
    if (c > 0) h -= c / n * std::log2(c / n);
  return h;
}

std::size_t classes_in(const std::vector<LabeledValue>& v) {
  std::set<int> s;
  for (const auto& x : v) s.insert(static_cast<int>(x.label));
  return s.size();
}

void oracle_split(const std::vector<LabeledValue>& v, std::vector<double>& cuts) {
  std::set<double> distinct;
  for (const auto& x : v) distinct.insert(x.value);
  if (distinct.size() < 2) return;
  std::vector<double> dv(distinct.begin(), distinct.end());
  double best_e = std::numeric_limits<double>::infinity(), best_cut = 0.0;
  std::vector<LabeledValue> best_l, best_r;
  for (std::size_t i = 0; i + 1 < dv.size(); ++i) {
    const double cut = (dv[i] + dv[i + 1]) / 2.0;
    std::vector<LabeledValue> l, r;
    for (const auto& x : v) (x.value < cut ? l : r).push_back(x);
    const double n = static_cast<double>(v.size());
    const double e = static_cast<double>(l.size()) / n * entropy_of(l) + static_cast<double>(r.size()) / n * entropy_of(r);
    if (e < best_e - 1e-12) {
      best_e = e;
      best_cut = cut;
      best_l = l;
      best_r = r;
    }
  }
  const double n = static_cast<double>(v.size());
  const double h = entropy_of(v);
  const double gain = h - best_e;
  const double k = static_cast<double>(classes_in(v)), k1 = static_cast<double>(classes_in(best_l)),
               k2 = static_cast<double>(classes_in(best_r));
  const double delta = std::log2(std::pow(3.0, k) - 2.0) - (k * h - k1 * entropy_of(best_l) - k2 * entropy_of(best_r));
  if (gain <= (std::log2(n - 1.0) + delta) / n) return;
  cuts.push_back(best_cut);
  oracle_split(best_l, cuts);
  oracle_split(best_r, cuts);
}

}  // namespace

std::vector<double> mdlp_oracle(std::vector<LabeledValue> values) {
  std::vector<double> cuts;
  oracle_split(values, cuts);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

std::string to_csv(const Dataset& data, const std::string& timestamp_column) {
  const auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
  };
  std::ostringstream out;
  for (const auto& f : data.schema.fields()) out << quote(f.name) << ",";
  out << timestamp_column << "\n";
  for (const auto& inst : data.instances) {
    for (const auto& v : inst.values) out << (v ? quote(*v) : std::string()) << ",";
    out << inst.submitted_at.text() << "\n";
  }
  return out.str();
}

}  // namespace fixtures
