#pragma once

namespace oamqi::cli {

// JSON schema for every report (and error object) the CLI prints.
inline constexpr const char* kReportSchema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "$id": "oamqi-report",
  "oneOf": [{"$ref": "#/$defs/report"}, {"$ref": "#/$defs/error"}],
  "$defs": {
    "probability": {"type": "number", "minimum": -1e-9, "maximum": 1.000000001},
    "nullable_number": {"type": ["number", "null"]},
    "complex_pair": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    "mode": {
      "type": "object",
      "required": ["path", "pol", "m"],
      "properties": {"path": {"type": "string"}, "pol": {"enum": ["H", "V"]}, "m": {"type": "integer"}}
    },
    "photon_state": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["path", "pol", "m", "re", "im"],
        "properties": {
          "path": {"type": "string"}, "pol": {"enum": ["H", "V"]}, "m": {"type": "integer"},
          "re": {"type": "number"}, "im": {"type": "number"}
        },
        "additionalProperties": false
      }
    },
    "two_photon_state": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["photon1", "photon2", "re", "im"],
        "properties": {
          "photon1": {"$ref": "#/$defs/mode"}, "photon2": {"$ref": "#/$defs/mode"},
          "re": {"type": "number"}, "im": {"type": "number"}
        },
        "additionalProperties": false
      }
    },
    "spectrum": {
      "type": "object",
      "required": ["kind"],
      "properties": {
        "kind": {"enum": ["uniform", "gaussian", "explicit"]},
        "sigma": {"type": "number", "exclusiveMinimum": 0},
        "coeffs": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 3}}
      }
    },
    "sampling": {
      "type": "object",
      "required": ["shots", "seed", "prng"],
      "properties": {"shots": {"type": "integer", "minimum": 1}, "seed": {"type": "integer", "minimum": 0}, "prng": {"type": "string"}}
    },
    "config": {
      "type": "object",
      "required": ["K", "spectrum", "shots", "seed", "format", "params"],
      "properties": {
        "K": {"type": "integer", "minimum": 1},
        "spectrum": {"$ref": "#/$defs/spectrum"},
        "shots": {"type": "integer", "minimum": 0},
        "seed": {"type": ["integer", "null"], "minimum": 0},
        "format": {"enum": ["json", "csv"]},
        "params": {"type": "object"}
      },
      "additionalProperties": false
    },
    "ports": {"type": "object", "additionalProperties": {"$ref": "#/$defs/probability"}},
    "coincidences": {
      "type": "object",
      "required": ["D13", "D14", "D23", "D24", "C"],
      "properties": {
        "D13": {"$ref": "#/$defs/probability"}, "D14": {"$ref": "#/$defs/probability"},
        "D23": {"$ref": "#/$defs/probability"}, "D24": {"$ref": "#/$defs/probability"},
        "C": {"oneOf": [{"$ref": "#/$defs/probability"}, {"type": "null"}]}
      }
    },
    "setting_pairs": {
      "type": "object",
      "required": ["theta_chi", "theta_chi2", "theta2_chi", "theta2_chi2"]
    },
    "report": {
      "type": "object",
      "required": ["command", "config"],
      "properties": {
        "command": {"enum": ["sorter", "tomography", "bell", "ekert", "soba", "densecode", "state"]},
        "config": {"$ref": "#/$defs/config"},
        "sampling": {"$ref": "#/$defs/sampling"}
      },
      "allOf": [
        {
          "if": {"properties": {"command": {"const": "sorter"}}},
          "then": {
            "required": ["circuit", "ports", "input"],
            "properties": {"circuit": {"type": "string"}, "ports": {"$ref": "#/$defs/ports"}, "input": {"$ref": "#/$defs/photon_state"}}
          }
        },
        {
          "if": {"properties": {"command": {"const": "tomography"}}},
          "then": {
            "required": ["s0", "s1", "s2", "s3", "rho", "clipped", "intensities", "spp_sign"],
            "properties": {
              "s0": {"type": "number"}, "s1": {"type": "number"}, "s2": {"type": "number"}, "s3": {"type": "number"},
              "rho": {
                "type": "array", "minItems": 2, "maxItems": 2,
                "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"$ref": "#/$defs/complex_pair"}}
              },
              "clipped": {"type": "boolean"},
              "fidelity": {"type": "number"},
              "spp_sign": {"enum": [-1, 1]},
              "intensities": {"type": "object", "required": ["s0_s1", "s2", "s3"]}
            }
          }
        },
        {
          "if": {"properties": {"command": {"const": "bell"}}},
          "then": {
            "required": ["C", "E", "B"],
            "properties": {
              "C": {"allOf": [{"$ref": "#/$defs/setting_pairs"}, {"additionalProperties": {"$ref": "#/$defs/coincidences"}}]},
              "E": {"allOf": [{"$ref": "#/$defs/setting_pairs"}, {"additionalProperties": {"type": "number", "minimum": -1.000000001, "maximum": 1.000000001}}]},
              "B": {"type": "number", "minimum": 0},
              "sigma_B": {"type": "number", "minimum": 0},
              "spectrum_symmetric": {"type": "boolean"}
            }
          }
        },
        {
          "if": {"properties": {"command": {"const": "ekert"}}},
          "then": {
            "required": ["key_a", "key_b", "qber", "chsh_estimate", "rounds", "seed"],
            "properties": {
              "key_a": {"type": "string", "pattern": "^[01]*$"},
              "key_b": {"type": "string", "pattern": "^[01]*$"},
              "qber": {"$ref": "#/$defs/nullable_number"},
              "chsh_estimate": {"$ref": "#/$defs/nullable_number"},
              "chsh_sigma": {"$ref": "#/$defs/nullable_number"},
              "rounds": {"type": "integer", "minimum": 1},
              "seed": {"type": "integer", "minimum": 0}
            }
          }
        },
        {
          "if": {"properties": {"command": {"const": "soba"}}},
          "then": {
            "required": ["distribution", "detector_labels"],
            "properties": {
              "distribution": {"type": "object", "required": ["D1", "D2", "D3", "D4"], "additionalProperties": {"$ref": "#/$defs/probability"}},
              "detector_labels": {"type": "object", "required": ["D1", "D2", "D3", "D4"]}
            }
          }
        },
        {
          "if": {"properties": {"command": {"const": "densecode"}}},
          "then": {
            "required": ["sent", "decoded_distribution", "accuracy"],
            "properties": {
              "sent": {"enum": ["00", "01", "10", "11"]},
              "decoded_distribution": {"type": "object", "required": ["00", "01", "10", "11"], "additionalProperties": {"$ref": "#/$defs/probability"}},
              "accuracy": {"$ref": "#/$defs/probability"}
            }
          }
        },
        {
          "if": {"properties": {"command": {"const": "state"}}},
          "then": {
            "required": ["state", "norm"],
            "properties": {
              "state": {"oneOf": [{"$ref": "#/$defs/photon_state"}, {"$ref": "#/$defs/two_photon_state"}]},
              "norm": {"type": "number"},
              "parity_marginals": {"type": "object", "required": ["EE", "EO", "OE", "OO"]}
            }
          }
        }
      ]
    },
    "error": {
      "type": "object",
      "required": ["error"],
      "properties": {
        "error": {
          "type": "object",
          "required": ["code", "message"],
          "properties": {"code": {"enum": ["usage", "validation", "guard", "internal"]}, "message": {"type": "string"}},
          "additionalProperties": false
        }
      },
      "additionalProperties": false
    }
  }
})json";

}  // namespace oamqi::cli
