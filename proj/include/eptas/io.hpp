#ifndef EPTAS_IO_HPP
#define EPTAS_IO_HPP

#include "eptas/model.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace eptas {

using Json = nlohmann::ordered_json;

namespace detail {
inline Rational rational_field(const Json& object, const char* key) {
	if (!object.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
	const auto& v = object.at(key);
	if (v.is_string()) return parse_rational(v.get<std::string>());
	if (v.is_number_integer()) return Rational(v.get<long long>());
	throw ParseError(std::string("field '") + key + "' must be a \"num/den\" string");
}
} // namespace detail

inline Instance instance_from_json(const Json& doc) {
	Instance instance;
	try {
		for (const auto& j : doc.at("jobs"))
			instance.jobs.push_back({detail::rational_field(j, "size"), detail::rational_field(j, "demand")});
		for (const auto& m : doc.at("machines")) instance.machines.push_back({detail::rational_field(m, "speed")});
		for (const auto& s : doc.at("supplies"))
			instance.supplies.push_back({detail::rational_field(s, "date"), detail::rational_field(s, "quantity")});
		const auto& p = doc.at("params");
		instance.params.epsilon = detail::rational_field(p, "epsilon");
		instance.params.psi = detail::rational_field(p, "psi");
		instance.params.phi = detail::rational_field(p, "phi");
		instance.params.rho = p.contains("rho") ? p.at("rho").get<int>() : 10;
	} catch (const Json::exception& e) {
		throw ParseError(std::string("instance JSON: ") + e.what());
	}
	return instance;
}

inline Json params_to_json(const SchemeParams& params) {
	return Json{{"epsilon", to_string(params.epsilon)},
	            {"psi", to_string(params.psi)},
	            {"phi", to_string(params.phi)},
	            {"rho", params.rho}};
}

inline Json instance_to_json(const Instance& instance) {
	Json doc;
	doc["jobs"] = Json::array();
	for (const auto& j : instance.jobs)
		doc["jobs"].push_back({{"size", to_string(j.size)}, {"demand", to_string(j.demand)}});
	doc["machines"] = Json::array();
	for (const auto& m : instance.machines) doc["machines"].push_back({{"speed", to_string(m.speed)}});
	doc["supplies"] = Json::array();
	for (const auto& s : instance.supplies)
		doc["supplies"].push_back({{"date", to_string(s.date)}, {"quantity", to_string(s.quantity)}});
	doc["params"] = params_to_json(instance.params);
	return doc;
}

inline Schedule schedule_from_json(const Json& doc, std::size_t machine_count) {
	Schedule schedule(machine_count);
	try {
		for (const auto& a : doc.at("assignments")) {
			const auto machine = a.at("machine").get<long long>();
			if (machine < 0 || static_cast<std::size_t>(machine) >= machine_count)
				throw StructuralError("unknown machine id " + std::to_string(machine));
			auto& list = schedule.machines[static_cast<std::size_t>(machine)];
			for (const auto& p : a.at("jobs")) {
				const auto job = p.at("job").get<long long>();
				if (job < 0) throw StructuralError("negative job id");
				list.push_back({static_cast<JobId>(job), detail::rational_field(p, "start")});
			}
		}
	} catch (const Json::exception& e) {
		throw ParseError(std::string("schedule JSON: ") + e.what());
	}
	return schedule;
}

inline Json schedule_to_json(const Schedule& schedule) {
	Json doc;
	doc["assignments"] = Json::array();
	for (std::size_t i = 0; i < schedule.machines.size(); ++i) {
		Json jobs = Json::array();
		for (const auto& p : schedule.machines[i]) jobs.push_back({{"job", p.job}, {"start", to_string(p.start)}});
		doc["assignments"].push_back({{"machine", i}, {"jobs", std::move(jobs)}});
	}
	return doc;
}

inline Json objective_to_json(const ObjectiveValue& value) {
	Json doc;
	doc["makespan"] = to_string(value.makespan);
	doc["norm_cost"] = value.norm_cost_exact ? Json(to_string(*value.norm_cost_exact)) : Json(value.norm_cost);
	doc["combined"] = value.combined_exact ? Json(to_string(*value.combined_exact)) : Json(value.combined);
	doc["combined_approx"] = value.combined;
	return doc;
}

inline Json read_json_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw ParseError("cannot open " + path);
	try {
		return Json::parse(in);
	} catch (const Json::exception& e) {
		throw ParseError(path + ": " + e.what());
	}
}

inline void write_json_file(const std::string& path, const Json& doc) {
	std::ofstream out(path);
	if (!out) throw std::runtime_error("cannot write " + path);
	out << doc.dump(2) << "\n";
}

} // namespace eptas

#endif
