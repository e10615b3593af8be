#pragma once

#include "errors.hpp"
#include "reduced.hpp"
#include "sweep.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace bellpoly {

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(const std::string& name)
{
	if(name == "csv") return OutputFormat::csv;
	if(name == "json") return OutputFormat::json;
	throw ConfigError("format", "expected csv or json, got '" + name + "'");
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v)
{
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

namespace detail {

/// Cells of one row, in the order of `columns`. Integer columns print as integers.
inline std::vector<std::string> row_cells(const SweepRow& r, const std::vector<std::string>& columns)
{
	std::vector<std::string> out;
	out.reserve(columns.size());
	auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; };
	for(const std::string& col : columns) {
		if(col == "t") out.push_back(format_double(r.t));
		else if(col == "j_over_j0") out.push_back(format_double(r.j_over_j0));
		else if(col == "pair_i") out.push_back(std::to_string(r.pair_i));
		else if(col == "pair_j") out.push_back(std::to_string(r.pair_j));
		else if(col == "b_horodecki") out.push_back(opt(r.b_horodecki));
		else if(col == "b_formula") out.push_back(opt(r.b_formula));
		else if(col == "sxx") out.push_back(opt(r.sxx));
		else if(col == "szz") out.push_back(opt(r.szz));
		else if(col == "monogamy_slack") out.push_back(opt(r.monogamy_slack));
		else if(col == "crossing") out.push_back(r.crossing ? std::to_string(*r.crossing) : std::string{});
		else if(col.size() > 1 && col[0] == 'e') {
			const std::size_t k = std::stoul(col.substr(1));
			out.push_back(k < r.energies.size() ? format_double(r.energies[k]) : std::string{});
		} else {
			throw InputError("unknown output column '" + col + "'");
		}
	}
	return out;
}

inline double parse_double(const std::string& cell, std::size_t line)
{
	std::size_t used = 0;
	double v = 0.0;
	try {
		v = std::stod(cell, &used);
	} catch(const std::exception&) {
		used = 0;
	}
	if(used != cell.size() || cell.empty()) {
		throw InputError("CSV line " + std::to_string(line) + ": cannot parse number '" + cell + "'");
	}
	return v;
}

} // namespace detail

inline std::string to_csv(const SweepResult& result)
{
	std::ostringstream os;
	for(std::size_t c = 0; c < result.columns.size(); ++c) {
		os << (c ? "," : "") << result.columns[c];
	}
	os << '\n';
	for(const SweepRow& r : result.rows) {
		const auto cells = detail::row_cells(r, result.columns);
		for(std::size_t c = 0; c < cells.size(); ++c) {
			os << (c ? "," : "") << cells[c];
		}
		os << '\n';
	}
	return os.str();
}

inline nlohmann::json metadata_json(const SweepMetadata& m)
{
	return {{"config", m.config},
	        {"version", m.version},
	        {"wall_time_seconds", m.wall_time_seconds},
	        {"threads", m.threads},
	        {"crossings", m.crossings}};
}

/// {"metadata": {...}, "columns": [...], "rows": [{column: value}, ...]}
inline nlohmann::json to_json_document(const SweepResult& result)
{
	nlohmann::json rows = nlohmann::json::array();
	for(const SweepRow& r : result.rows) {
		nlohmann::json row = nlohmann::json::object();
		const auto cells = detail::row_cells(r, result.columns);
		for(std::size_t c = 0; c < cells.size(); ++c) {
			const std::string& col = result.columns[c];
			if(cells[c].empty()) row[col] = nullptr;
			else if(col == "pair_i" || col == "pair_j" || col == "crossing") row[col] = std::stoi(cells[c]);
			else row[col] = std::stod(cells[c]);
		}
		rows.push_back(std::move(row));
	}
	return {{"metadata", metadata_json(result.metadata)}, {"columns", result.columns}, {"rows", rows}};
}

/// Inverse of to_csv. Metadata is not part of the CSV and stays default.
inline SweepResult parse_csv(const std::string& text)
{
	SweepResult out;
	std::istringstream is(text);
	std::string line;
	std::size_t line_no = 0;
	auto split = [](const std::string& s) {
		std::vector<std::string> cells;
		std::string cell;
		std::istringstream ls(s);
		while(std::getline(ls, cell, ',')) cells.push_back(cell);
		if(!s.empty() && s.back() == ',') cells.emplace_back();
		return cells;
	};
	if(!std::getline(is, line)) throw InputError("CSV line 1: missing header");
	++line_no;
	out.columns = split(line);
	while(std::getline(is, line)) {
		++line_no;
		if(line.empty()) continue;
		const auto cells = split(line);
		if(cells.size() != out.columns.size()) {
			throw InputError("CSV line " + std::to_string(line_no) + ": expected "
			                 + std::to_string(out.columns.size()) + " cells, got "
			                 + std::to_string(cells.size()));
		}
		SweepRow r;
		for(std::size_t c = 0; c < cells.size(); ++c) {
			const std::string& col = out.columns[c];
			const std::string& cell = cells[c];
			if(cell.empty()) continue;
			const double v = detail::parse_double(cell, line_no);
			if(col == "t") r.t = v;
			else if(col == "j_over_j0") r.j_over_j0 = v;
			else if(col == "pair_i") r.pair_i = static_cast<int>(v);
			else if(col == "pair_j") r.pair_j = static_cast<int>(v);
			else if(col == "b_horodecki") r.b_horodecki = v;
			else if(col == "b_formula") r.b_formula = v;
			else if(col == "sxx") r.sxx = v;
			else if(col == "szz") r.szz = v;
			else if(col == "monogamy_slack") r.monogamy_slack = v;
			else if(col == "crossing") r.crossing = static_cast<int>(v);
			else if(col.size() > 1 && col[0] == 'e') {
				const std::size_t k = std::stoul(col.substr(1));
				if(r.energies.size() <= k) r.energies.resize(k + 1);
				r.energies[k] = v;
			} else {
				throw InputError("CSV line 1: unknown column '" + col + "'");
			}
		}
		out.rows.push_back(std::move(r));
	}
	return out;
}

inline void write_text(const std::string& path, const std::string& text)
{
	std::ofstream os(path, std::ios::binary);
	if(!os) throw IoError("cannot open '" + path + "' for writing");
	os << text;
	os.close();
	if(!os) throw IoError("failed writing '" + path + "'");
}

inline std::string read_text(const std::string& path)
{
	std::ifstream is(path, std::ios::binary);
	if(!is) throw IoError("cannot open '" + path + "' for reading");
	std::ostringstream ss;
	ss << is.rdbuf();
	return ss.str();
}

inline nlohmann::json read_json(const std::string& path)
{
	const std::string text = read_text(path);
	try {
		return nlohmann::json::parse(text);
	} catch(const nlohmann::json::parse_error& ex) {
		throw ConfigError("<file>", "'" + path + "' is not valid JSON: " + ex.what());
	}
}

/// Write a sweep result. CSV output also gets a `<path>.meta.json` sidecar
/// holding the metadata, so the CSV body itself stays deterministic.
inline void emit(const SweepResult& result, OutputFormat format, const std::string& path)
{
	if(format == OutputFormat::csv) {
		write_text(path, to_csv(result));
		write_text(path + ".meta.json", metadata_json(result.metadata).dump(2) + "\n");
	} else {
		write_text(path, to_json_document(result).dump(2) + "\n");
	}
}

/// Two-qubit state from {"real": 4x4, "imag": 4x4 (optional), "sites": [i, j] (optional)}.
inline TwoQubitState parse_state(const nlohmann::json& js)
{
	TwoQubitState s{{0, 1}, Eigen::Matrix4cd::Zero()};
	try {
		auto fill = [&](const char* key, bool imag) {
			const auto& m = js.at(key);
			if(!m.is_array() || m.size() != 4) throw ConfigError(key, "must be a 4x4 array");
			for(int r = 0; r < 4; ++r) {
				if(!m[r].is_array() || m[r].size() != 4) throw ConfigError(key, "must be a 4x4 array");
				for(int c = 0; c < 4; ++c) {
					const double v = m[r][c].get<double>();
					if(imag) s.rho(r, c) += Complex{0.0, v};
					else s.rho(r, c) += v;
				}
			}
		};
		fill("real", false);
		if(js.contains("imag")) fill("imag", true);
		if(js.contains("sites")) s.sites = {js["sites"].at(0).get<int>(), js["sites"].at(1).get<int>()};
	} catch(const nlohmann::json::exception& ex) {
		throw ConfigError("state", ex.what());
	}
	validate_state(s.rho);
	return s;
}

} // namespace bellpoly
