#pragma once
// Copies of schema/run_config.schema.json and schema/report.schema.json; the
// config test checks that they stay identical to the shipped files.

namespace massmeter::schemas {

inline constexpr const char* run_config = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "massmeter run configuration",
  "type": "object",
  "additionalProperties": false,
  "required": ["domain"],
  "properties": {
    "domain": {
      "type": "object",
      "additionalProperties": false,
      "required": ["l", "a1", "a2", "orientation"],
      "properties": {
        "l": {"type": "number", "exclusiveMinimum": 0},
        "a1": {"type": "number", "minimum": 0},
        "a2": {"type": "number", "exclusiveMinimum": 0},
        "orientation": {"type": "string", "enum": ["acute", "obtuse"]},
        "epsilon": {"type": "number", "minimum": 0},
        "gtilde": {
          "type": "object",
          "additionalProperties": false,
          "required": ["sine_coefficients"],
          "properties": {
            "sine_coefficients": {"type": "array", "items": {"type": "number"}},
            "normalize": {"type": "boolean"}
          }
        },
        "wtilde": {
          "type": "object",
          "additionalProperties": false,
          "required": ["polynomial"],
          "properties": {
            "polynomial": {
              "type": "array",
              "minItems": 1,
              "items": {
                "type": "object",
                "additionalProperties": false,
                "required": ["px", "py", "coef"],
                "properties": {
                  "px": {"type": "integer", "minimum": 0},
                  "py": {"type": "integer", "minimum": 0},
                  "coef": {"type": "number"}
                }
              }
            },
            "normalize": {"type": "boolean"}
          }
        }
      }
    },
    "solver": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "element_order": {"type": "integer", "enum": [1, 2]},
        "n": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer", "minimum": 0},
        "threads": {"type": "integer", "minimum": 1}
      }
    },
    "experiment": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "epsilon_grid": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 0}},
        "levels": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "extrapolate": {"type": "boolean"},
        "tolerances": {
          "type": "object",
          "additionalProperties": false,
          "properties": {
            "side_mass_relative": {"type": "number", "exclusiveMinimum": 0},
            "rellich_r0": {"type": "number", "exclusiveMinimum": 0},
            "rellich_x": {"type": "number", "exclusiveMinimum": 0},
            "rellich_y": {"type": "number", "exclusiveMinimum": 0},
            "identity_relative": {"type": "number", "exclusiveMinimum": 0},
            "ydy": {"type": "number", "exclusiveMinimum": 0},
            "slope_min": {"type": "number"},
            "c_mass_factor": {"type": "number", "exclusiveMinimum": 0},
            "c_mass_growth": {"type": "number", "exclusiveMinimum": 0}
          }
        }
      }
    },
    "output": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "directory": {"type": "string"},
        "formats": {"type": "array", "items": {"type": "string", "enum": ["csv", "json", "svg", "mesh"]}}
      }
    }
  }
}
)json";

inline constexpr const char* report = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "massmeter verify report",
  "type": "object",
  "additionalProperties": false,
  "required": ["command", "domain", "solver", "area", "side_lengths", "modes", "identity_max_residual", "rules", "pass"],
  "properties": {
    "command": {"type": "string", "enum": ["verify"]},
    "domain": {
      "type": "object",
      "additionalProperties": false,
      "required": ["l", "a1", "a2", "orientation", "epsilon", "perturbed", "potential"],
      "properties": {
        "l": {"type": "number"},
        "a1": {"type": "number"},
        "a2": {"type": "number"},
        "orientation": {"type": "string", "enum": ["acute", "obtuse"]},
        "epsilon": {"type": "number"},
        "perturbed": {"type": "boolean"},
        "potential": {"type": "boolean"}
      }
    },
    "solver": {
      "type": "object",
      "additionalProperties": false,
      "required": ["element_order", "n", "k", "tol", "seed", "threads", "unknowns"],
      "properties": {
        "element_order": {"type": "integer"},
        "n": {"type": "integer"},
        "k": {"type": "integer"},
        "tol": {"type": "number"},
        "seed": {"type": "integer"},
        "threads": {"type": "integer"},
        "unknowns": {"type": "integer"}
      }
    },
    "area": {"type": "number"},
    "side_lengths": {"type": "array", "minItems": 3, "maxItems": 3, "items": {"type": "number"}},
    "modes": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["mode", "lambda", "residual", "I", "R"],
        "properties": {
          "mode": {"type": "integer", "minimum": 1},
          "lambda": {"type": "number"},
          "residual": {"type": "number"},
          "I": {"type": "array", "minItems": 3, "maxItems": 3, "items": {"type": "number"}},
          "R": {"type": "array", "minItems": 3, "maxItems": 3, "items": {"type": "number"}}
        }
      }
    },
    "identity_max_residual": {"type": "number", "minimum": 0},
    "rules": {
      "type": "array",
      "items": {
        "type": "object",
        "additionalProperties": false,
        "required": ["rule", "value", "tolerance", "pass"],
        "properties": {
          "rule": {"type": "string"},
          "value": {"type": "number"},
          "tolerance": {"type": "number"},
          "pass": {"type": "boolean"}
        }
      }
    },
    "pass": {"type": "boolean"}
  }
}
)json";

} // namespace massmeter::schemas
