// Command line front end: runs the mechanism and every analysis on JSON
// instance files. Exit codes: 0 success, 1 property violated, 2 invalid
// input, 3 size guard exceeded.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqalloc/seqalloc.hpp"

namespace {

using namespace seqalloc;

constexpr int kExitOk = 0;
constexpr int kExitPropertyViolated = 1;
constexpr int kExitInvalidInput = 2;
constexpr int kExitSizeGuard = 3;

struct CommonArgs {
  std::string instance_path;
  std::string profile_path;
  std::string utilities_kind = "lex";
  bool json = false;
};

UtilityKind parse_kind(const std::string& kind) {
  if (kind == "lex") return UtilityKind::lexicographic;
  if (kind == "uplex") return UtilityKind::upward_lexicographic;
  if (kind == "borda") return UtilityKind::borda;
  throw ValidationError("unknown utility kind: " + kind);
}

/// Utilities for every agent: the instance's own where present, otherwise
/// the requested default kind built on the truthful ranking.
std::vector<UtilityFunction> resolve_utilities(const Instance& instance, const std::string& kind,
                                               bool require_cardinal) {
  std::vector<UtilityFunction> utilities;
  for (int agent = 0; agent < instance.agent_count(); ++agent) {
    if (instance.utilities[agent]) {
      utilities.push_back(*instance.utilities[agent]);
    } else if (require_cardinal) {
      throw ValidationError("agent " + instance.agent_names[agent] +
                            " has no utilities in the instance file (required by --mode cardinal)");
    } else {
      utilities.push_back(make_utility(parse_kind(kind), instance.truthful.rankings[agent]));
    }
  }
  return utilities;
}

Profile start_profile(const Instance& instance, const CommonArgs& args) {
  if (args.profile_path.empty()) return instance.truthful;
  return load_profile(args.profile_path, instance);
}

void emit(const Instance& instance, const std::string& command, const Json& result,
          const Json& witness, bool as_json, const std::string& human) {
  if (as_json) {
    Json doc;
    doc["command"] = command;
    doc["instance"] = instance_json(instance);
    doc["result"] = result;
    doc["witness"] = witness;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

std::string bundle_text(const Bundle& bundle, const Instance& instance) {
  std::string text = "{";
  for (std::size_t i = 0; i < bundle.size(); ++i) {
    if (i > 0) text += ", ";
    text += instance.items[bundle[i]];
  }
  return text + "}";
}

std::string ranking_text(const Ranking& ranking, const Instance& instance) {
  std::string text;
  for (std::size_t i = 0; i < ranking.order.size(); ++i) {
    if (i > 0) text += ", ";
    text += instance.items[ranking.order[i]];
  }
  return text;
}

std::string allocation_text(const Assignment& assignment, const Instance& instance) {
  std::string text;
  for (int agent = 0; agent < assignment.agents(); ++agent)
    text += "  agent " + instance.agent_names[agent] + ": " +
            bundle_text(assignment.bundles[agent], instance) + "\n";
  text += "  picks:";
  for (const Pick& pick : assignment.trace)
    text += " " + instance.items[pick.item] + "(" + instance.agent_names[pick.agent] + ")";
  return text + "\n";
}

int cmd_run(const CommonArgs& args) {
  const Instance instance = load_instance(args.instance_path);
  const Profile profile = start_profile(instance, args);
  const Assignment assignment = sequential_allocation(profile, instance.sequence);
  Json result;
  result["allocation"] = assignment_json(assignment, instance);
  emit(instance, "run", result, nullptr, args.json,
       "allocation:\n" + allocation_text(assignment, instance));
  return kExitOk;
}

int cmd_bluff(const CommonArgs& args) {
  const Instance instance = load_instance(args.instance_path);
  const Profile bluff = bluff_profile(instance);
  const Assignment assignment = sequential_allocation(bluff, instance.sequence);
  Json result;
  result["profile"] = profile_json(bluff, instance);
  result["allocation"] = assignment_json(assignment, instance);
  emit(instance, "bluff", result, nullptr, args.json,
       "bluff profile (all agents): " + ranking_text(bluff.rankings[0], instance) +
           "\nallocation:\n" + allocation_text(assignment, instance));
  return kExitOk;
}

int cmd_crossout(const CommonArgs& args) {
  const Instance instance = load_instance(args.instance_path);
  const Profile crossout = crossout_profile(instance);
  const Assignment assignment = sequential_allocation(crossout, instance.sequence);
  Json result;
  result["profile"] = profile_json(crossout, instance);
  result["allocation"] = assignment_json(assignment, instance);
  emit(instance, "crossout", result, nullptr, args.json,
       "crossout profile (both agents): " + ranking_text(crossout.rankings[0], instance) +
           "\nallocation:\n" + allocation_text(assignment, instance));
  return kExitOk;
}

int cmd_dynamics(const CommonArgs& args, const std::string& policy, int max_steps,
                 const std::string& replay_path) {
  const Instance instance = load_instance(args.instance_path);
  const std::vector<UtilityFunction> utilities =
      resolve_utilities(instance, args.utilities_kind, false);

  DynamicsOptions options;
  options.max_steps = max_steps;
  if (!replay_path.empty()) {
    options.policy = DynamicsPolicy::replay;
    for (auto& [agent, ranking] : load_replay(replay_path, instance))
      options.replay.push_back({agent, std::move(ranking)});
  } else if (policy == "round-robin") {
    options.policy = DynamicsPolicy::round_robin;
  } else if (policy == "first-improving") {
    options.policy = DynamicsPolicy::first_improving;
  } else if (policy == "replay") {
    throw ValidationError("--policy replay needs --replay FILE");
  } else {
    throw ValidationError("unknown policy: " + policy);
  }

  const Profile start = start_profile(instance, args);
  const DynamicsTrace trace = better_response_dynamics(start, utilities, instance.sequence, options);

  std::string verdict_text;
  Json result;
  switch (trace.verdict) {
    case DynamicsVerdict::converged_to_pne:
      verdict_text = "converged-to-PNE after " + std::to_string(trace.steps.size()) + " steps";
      result["verdict"] = "converged-to-PNE";
      break;
    case DynamicsVerdict::cycle_detected:
      verdict_text = "cycle-detected at step " + std::to_string(trace.steps.size()) +
                     " (profile first seen at index " + std::to_string(trace.cycle_first_index) +
                     ")";
      result["verdict"] = "cycle-detected";
      result["cycle_first_index"] = trace.cycle_first_index;
      result["detected_at_step"] = trace.steps.size();
      break;
    case DynamicsVerdict::step_cap_reached:
      verdict_text = "step-cap-reached after " + std::to_string(trace.steps.size()) + " steps";
      result["verdict"] = "step-cap-reached";
      break;
  }
  result["steps"] = Json::array();
  std::string human;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const DynamicsStep& step = trace.steps[k];
    Json node;
    node["step"] = k + 1;
    node["agent"] = instance.agent_names[step.agent];
    node["new_ranking"] = ranking_json(step.new_ranking, instance);
    node["allocation"] = assignment_json(step.result, instance);
    result["steps"].push_back(std::move(node));
    human += "step " + std::to_string(k + 1) + ": agent " + instance.agent_names[step.agent] +
             " -> " + ranking_text(step.new_ranking, instance) + "\n";
  }
  result["final_profile"] = profile_json(trace.final_profile, instance);
  human += "verdict: " + verdict_text + "\n";
  emit(instance, "dynamics", result, nullptr, args.json, human);
  return kExitOk;
}

int cmd_check_pne(const CommonArgs& args, const std::string& mode) {
  const Instance instance = load_instance(args.instance_path);
  const Profile profile = start_profile(instance, args);

  bool is_pne = false;
  Json witness = nullptr;
  std::string human;
  if (mode == "all-consistent") {
    is_pne = is_pne_all_consistent(profile, instance.truthful, instance.sequence);
    human = std::string("PNE under all consistent utilities: ") + (is_pne ? "yes" : "no") + "\n";
  } else {
    const bool cardinal = mode == "cardinal";
    if (!cardinal && mode != "lex") throw ValidationError("unknown mode: " + mode);
    std::vector<UtilityFunction> used;
    if (cardinal) {
      used = resolve_utilities(instance, "lex", true);
    } else {
      for (int a = 0; a < instance.agent_count(); ++a)
        used.push_back(make_utility(UtilityKind::lexicographic, instance.truthful.rankings[a]));
    }
    const NashCheck check = is_pure_nash(profile, used, instance.sequence);
    is_pne = check.is_pne;
    human = std::string("pure Nash equilibrium (") + mode + "): " + (is_pne ? "yes" : "no") + "\n";
    if (check.witness) {
      Json node;
      node["agent"] = instance.agent_names[check.witness->agent];
      node["report"] = ranking_json(check.witness->report, instance);
      node["bundle"] = bundle_json(check.witness->bundle, instance);
      node["old_value"] = to_string(check.witness->old_value);
      node["new_value"] = to_string(check.witness->new_value);
      witness = std::move(node);
      human += "profitable deviation: agent " + instance.agent_names[check.witness->agent] +
               " -> " + ranking_text(check.witness->report, instance) + " gets " +
               bundle_text(check.witness->bundle, instance) + " (" +
               to_string(check.witness->old_value) + " -> " + to_string(check.witness->new_value) +
               ")\n";
    }
  }
  Json result;
  result["mode"] = mode;
  result["is_pne"] = is_pne;
  emit(instance, "check-pne", result, witness, args.json, human);
  return is_pne ? kExitOk : kExitPropertyViolated;
}

int cmd_check_pareto(const CommonArgs& args) {
  const Instance instance = load_instance(args.instance_path);
  const Profile profile = start_profile(instance, args);
  const Assignment assignment = sequential_allocation(profile, instance.sequence);
  const ParetoCheck check = is_pareto_optimal_pc(instance.truthful, assignment);

  Json result;
  result["pareto_optimal"] = check.optimal;
  result["allocation"] = assignment_json(assignment, instance);
  Json witness = nullptr;
  std::string human = std::string("Pareto optimal (pairwise comparisons): ") +
                      (check.optimal ? "yes" : "no") + "\n";
  if (check.witness) {
    Json node = Json::object();
    for (int agent = 0; agent < instance.agent_count(); ++agent)
      node[instance.agent_names[agent]] = bundle_json((*check.witness)[agent], instance);
    witness = std::move(node);
    human += "dominating assignment:\n";
    for (int agent = 0; agent < instance.agent_count(); ++agent)
      human += "  agent " + instance.agent_names[agent] + ": " +
               bundle_text((*check.witness)[agent], instance) + "\n";
  }
  emit(instance, "check-pareto", result, witness, args.json, human);
  return check.optimal ? kExitOk : kExitPropertyViolated;
}

int cmd_stackelberg(const CommonArgs& args, int leader_number, const std::string& method,
                    bool advantage) {
  const Instance instance = load_instance(args.instance_path);
  if (instance.agent_count() != 2)
    throw ValidationError("Stackelberg analysis is defined for exactly two agents");
  const int leader = leader_number - 1;
  if (leader != 0 && leader != 1) throw ValidationError("--leader must be 1 or 2");

  // Fill missing utilities from --utilities so ordinal instances stay usable.
  Instance filled = instance;
  for (int agent = 0; agent < 2; ++agent)
    if (!filled.utilities[agent])
      filled.utilities[agent].emplace(
          make_utility(parse_kind(args.utilities_kind), filled.truthful.rankings[agent]));

  StackelbergMethod m = StackelbergMethod::dp;
  if (method == "brute") m = StackelbergMethod::brute;
  else if (method == "both") m = StackelbergMethod::both;
  else if (method != "dp") throw ValidationError("unknown method: " + method);

  const CommitmentReport report = commitment_advantage(filled, leader, m);
  Json result;
  result["leader"] = instance.agent_names[leader];
  result["method"] = method;
  result["optimal_ranking"] = ranking_json(report.optimal_ranking, instance);
  result["leader_value"] = to_string(report.optimal_value);
  result["follower_take"] = bundle_json(report.follower_take, instance);
  std::string human = "leader: agent " + instance.agent_names[leader] + " (" + method + ")\n" +
                      "optimal commitment: " + ranking_text(report.optimal_ranking, instance) +
                      "\nleader value: " + to_string(report.optimal_value) +
                      "\nfollower takes: " + bundle_text(report.follower_take, instance) + "\n";
  if (advantage) {
    result["truthful_value"] = to_string(report.truthful_value);
    result["advantage"] = to_string(report.advantage);
    human += "truthful commitment value: " + to_string(report.truthful_value) +
             "\nadvantage: " + to_string(report.advantage) + "\n";
  }
  emit(instance, advantage ? "advantage" : "stackelberg", result, nullptr, args.json, human);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sequential allocation as a one-shot game: mechanism, equilibria, Pareto and "
               "commitment analyses"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string policy = "round-robin";
  std::string replay_path;
  std::string mode = "all-consistent";
  std::string method = "dp";
  int max_steps = 10000;
  int leader_number = 1;

  auto add_common = [&](CLI::App* cmd, bool with_profile = true) {
    cmd->add_option("-i,--instance", args.instance_path, "instance JSON file")->required();
    cmd->add_flag("--json", args.json, "emit a machine-readable JSON document");
    if (with_profile)
      cmd->add_option("--profile", args.profile_path,
                      "profile JSON file ({\"rankings\": [[...], ...]}); default: truthful");
  };

  CLI::App* run = app.add_subcommand("run", "run sequential allocation");
  add_common(run);

  CLI::App* bluff = app.add_subcommand("bluff", "construct the bluff profile and its allocation");
  add_common(bluff, false);

  CLI::App* crossout =
      app.add_subcommand("crossout", "construct the two-agent crossout profile and its allocation");
  add_common(crossout, false);

  CLI::App* dynamics = app.add_subcommand("dynamics", "better-response dynamics");
  add_common(dynamics);
  dynamics->add_option("--policy", policy, "round-robin | first-improving | replay");
  dynamics->add_option("--max-steps", max_steps, "step cap (default 10000)");
  dynamics->add_option("--replay", replay_path, "replay move file (implies --policy replay)");
  dynamics->add_option("--utilities", args.utilities_kind, "lex | uplex | borda (default lex)");

  CLI::App* check_pne = app.add_subcommand("check-pne", "check pure Nash equilibrium");
  add_common(check_pne);
  check_pne->add_option("--mode", mode, "cardinal | lex | all-consistent (default all-consistent)");

  CLI::App* check_pareto =
      app.add_subcommand("check-pareto", "check Pareto optimality under pairwise comparisons");
  add_common(check_pareto);

  CLI::App* stackelberg = app.add_subcommand("stackelberg", "optimal leader commitment");
  add_common(stackelberg, false);
  stackelberg->add_option("--leader", leader_number, "committing agent, 1 or 2 (default 1)");
  stackelberg->add_option("--method", method, "dp | brute | both (default dp)");
  stackelberg->add_option("--utilities", args.utilities_kind,
                          "default utilities for agents without explicit ones");

  CLI::App* advantage = app.add_subcommand("advantage", "truthful vs optimal commitment");
  add_common(advantage, false);
  advantage->add_option("--leader", leader_number, "committing agent, 1 or 2 (default 1)");
  advantage->add_option("--method", method, "dp | brute | both (default dp)");
  advantage->add_option("--utilities", args.utilities_kind,
                        "default utilities for agents without explicit ones");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (run->parsed()) return cmd_run(args);
    if (bluff->parsed()) return cmd_bluff(args);
    if (crossout->parsed()) return cmd_crossout(args);
    if (dynamics->parsed()) return cmd_dynamics(args, policy, max_steps, replay_path);
    if (check_pne->parsed()) return cmd_check_pne(args, mode);
    if (check_pareto->parsed()) return cmd_check_pareto(args);
    if (stackelberg->parsed()) return cmd_stackelberg(args, leader_number, method, false);
    if (advantage->parsed()) return cmd_stackelberg(args, leader_number, method, true);
  } catch (const ReplayError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPropertyViolated;
  } catch (const SizeGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSizeGuard;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
