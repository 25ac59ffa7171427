use std::collections::BTreeMap;
use std::fmt;

use gerbe_core::Rational64;
use serde_json::{json, Value as Json};
use toml::{Table, Value};

pub const COMMANDS: [&str; 8] = ["spectrum", "cover", "cocycle", "fock", "caloron", "moduli", "pairing", "all"];

/// Commands with their own parameter section, in the order `all` runs them.
pub const SECTIONS: [&str; 7] = ["spectrum", "cover", "cocycle", "fock", "caloron", "moduli", "pairing"];

pub const DEFAULT_SEED: i64 = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Float,
    Str,
    /// Exact rational written as a string, `"5/2"` or `"3"`.
    Rational,
    IntList,
    FloatList,
    /// List of phase lists, one per holonomy.
    PhaseLists,
    /// Loop word as `[[generator, ±1], …]`.
    Word,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Int => "integer",
            Kind::Float => "float",
            Kind::Str => "string",
            Kind::Rational => "rational string",
            Kind::IntList => "integer array",
            Kind::FloatList => "float array",
            Kind::PhaseLists => "array of float arrays",
            Kind::Word => "array of [generator, exponent] pairs",
        }
    }
}

pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    /// TOML literal.
    pub default: &'static str,
    /// Inclusive lower bound for numbers and every list entry.
    pub min: Option<f64>,
    pub doc: &'static str,
}

const fn key(name: &'static str, kind: Kind, default: &'static str, min: Option<f64>, doc: &'static str) -> Key {
    Key {
        name,
        kind,
        default,
        min,
        doc,
    }
}

use Kind::*;

const SPECTRUM_KEYS: &[Key] = &[
    key("window", Int, "4", Some(1.0), "Fourier modes |m| <= N"),
    key("phases", PhaseLists, "[]", None, "holonomy eigenphases in turns; empty selects the reference suite"),
    key("windings", IntList, "[1]", None, "U(1) windings of the flow loop"),
    key("steps", Int, "64", Some(2.0), "samples per flow loop"),
    key("cut", Rational, "\"1/3\"", None, "cut for spectral flow"),
];

const COVER_KEYS: &[Key] = &[
    key("window", Int, "4", Some(1.0), "Fourier modes |m| <= N"),
    key("phases", PhaseLists, "[]", None, "holonomy eigenphases in turns; empty selects the reference suite"),
    key("cut_denominator", Int, "10", Some(1.0), "candidate cuts are (2k+1)/(2q) strictly inside the window"),
];

const COCYCLE_KEYS: &[Key] = &[
    key("window", Int, "4", Some(1.0), "Fourier modes |m| <= N"),
    key("phases", PhaseLists, "[]", None, "holonomy eigenphases in turns; empty selects the reference suite"),
    key("cut_denominator", Int, "3", Some(1.0), "candidate cuts are (2k+1)/(2q) strictly inside the window"),
    key("hodge_max_dim", Int, "6", Some(1.0), "largest dimension for the Hodge dual check"),
];

const FOCK_KEYS: &[Key] = &[
    key("colors", Int, "2", Some(1.0), "number of colors"),
    key("window", Int, "6", Some(1.0), "Fourier modes |m| <= N"),
    key("lambda", Rational, "\"1/2\"", None, "reference cut, not an integer"),
    key("mu", Rational, "\"5/2\"", None, "shifted cut, above lambda"),
    key("mode_bound", Int, "2", Some(0.0), "sweep |m|, |n| <= bound"),
    key("car_excitations", Int, "2", Some(0.0), "particle plus hole cap for the CAR test states"),
    key("exp_times", FloatList, "[0.5, -0.3, 0.8]", None, "times t of the projective exponentials, |t| <= 1"),
];

const CALORON_KEYS: &[Key] = &[
    key("preset", Str, "\"su2-family\"", None, "connection preset name"),
    key("amplitudes", FloatList, "[]", None, "preset amplitude overrides"),
    key("theta_points", Int, "8", Some(8.0), "circle samples P"),
    key("base_points", Int, "16", Some(5.0), "base samples M per axis; the identity is also run at 2M"),
    key("min_order", Float, "1.9", None, "required convergence order of the curvature identity"),
    key("gauge_winding", Int, "1", None, "winding of the loop gauge transformation"),
    key("gauge_theta_points", Int, "16", Some(8.0), "circle samples for the gauge law; also run at twice this"),
    key("gauge_base_points", Int, "6", Some(5.0), "base samples for the gauge law"),
];

const MODULI_KEYS: &[Key] = &[
    key("conjugations", Int, "10", Some(0.0), "pseudorandom conjugations for invariance checks"),
    key("flow_steps", Int, "32", Some(4.0), "samples per spectral-flow loop"),
    key("flow_window", Int, "4", Some(1.0), "Fourier window for spectral flow"),
    key("words", Int, "20", Some(0.0), "pseudorandom word pairs for the homomorphism check"),
];

const PAIRING_KEYS: &[Key] = &[
    key("family", Str, "\"loop\"", None, "pairing family: constant, static or loop"),
    key("epsilon", Float, "0.5", Some(0.0), "family amplitude"),
    key("windings", IntList, "[1, 1, 1]", None, "parameter windings of the loop family"),
    key("gamma", Word, "[[1, 1], [2, 1]]", None, "loop word along which holonomy is taken"),
    key("representation", Str, "\"adjoint\"", None, "trivial, fundamental, adjoint, sym:K or ext:K of su(2)"),
    key("theta_points", Int, "16", Some(8.0), "circle samples P"),
    key("base_points", IntList, "[8, 12]", Some(5.0), "base resolutions for the self-convergence sweep"),
];

pub fn section_keys(section: &str) -> &'static [Key] {
    match section {
        "spectrum" => SPECTRUM_KEYS,
        "cover" => COVER_KEYS,
        "cocycle" => COCYCLE_KEYS,
        "fock" => FOCK_KEYS,
        "caloron" => CALORON_KEYS,
        "moduli" => MODULI_KEYS,
        "pairing" => PAIRING_KEYS,
        _ => &[],
    }
}

fn default_value(k: &Key) -> Value {
    let doc: Table = toml::from_str(&format!("v = {}", k.default)).expect("schema defaults are valid TOML");
    doc["v"].clone()
}

fn as_number(v: &Value) -> Option<f64> {
    match v {
        Value::Integer(i) => Some(*i as f64),
        Value::Float(f) => Some(*f),
        _ => None,
    }
}

fn check_min(path: &str, k: &Key, x: f64) -> Result<(), ConfigError> {
    if let Some(min) = k.min {
        if x < min {
            return err(format!("key '{path}' must be >= {min}, got {x}"));
        }
    }
    Ok(())
}

/// Type-checks `v` against `k`, normalizing integers given for floats.
fn check_value(path: &str, k: &Key, v: &Value) -> Result<Value, ConfigError> {
    let bad = || err(format!("key '{path}' expects {}", k.kind.name()));
    let out = match k.kind {
        Kind::Int => match v {
            Value::Integer(i) => {
                check_min(path, k, *i as f64)?;
                v.clone()
            }
            _ => return bad(),
        },
        Kind::Float => match as_number(v) {
            Some(x) if x.is_finite() => {
                check_min(path, k, x)?;
                Value::Float(x)
            }
            _ => return bad(),
        },
        Kind::Str => match v {
            Value::String(_) => v.clone(),
            _ => return bad(),
        },
        Kind::Rational => match v {
            Value::String(s) => {
                if s.trim().parse::<Rational64>().is_err() {
                    return err(format!("key '{path}' is not a rational: '{s}'"));
                }
                v.clone()
            }
            _ => return bad(),
        },
        Kind::IntList => match v {
            Value::Array(xs) => {
                for x in xs {
                    match x {
                        Value::Integer(i) => check_min(path, k, *i as f64)?,
                        _ => return bad(),
                    }
                }
                v.clone()
            }
            _ => return bad(),
        },
        Kind::FloatList => match v {
            Value::Array(xs) => {
                let mut out = Vec::with_capacity(xs.len());
                for x in xs {
                    match as_number(x) {
                        Some(f) if f.is_finite() => {
                            check_min(path, k, f)?;
                            out.push(Value::Float(f));
                        }
                        _ => return bad(),
                    }
                }
                Value::Array(out)
            }
            _ => return bad(),
        },
        Kind::PhaseLists => match v {
            Value::Array(rows) => {
                let mut out = Vec::with_capacity(rows.len());
                for row in rows {
                    let Value::Array(xs) = row else { return bad() };
                    if xs.is_empty() {
                        return err(format!("key '{path}' has an empty phase list"));
                    }
                    let mut r = Vec::with_capacity(xs.len());
                    for x in xs {
                        match as_number(x) {
                            Some(f) if f.is_finite() => r.push(Value::Float(f)),
                            _ => return bad(),
                        }
                    }
                    out.push(Value::Array(r));
                }
                Value::Array(out)
            }
            _ => return bad(),
        },
        Kind::Word => match v {
            Value::Array(letters) if !letters.is_empty() => {
                for l in letters {
                    match l.as_array().map(|p| p.as_slice()) {
                        Some([Value::Integer(g), Value::Integer(e)]) if *g >= 1 && e.abs() == 1 => {}
                        _ => return bad(),
                    }
                }
                v.clone()
            }
            _ => return bad(),
        },
    };
    Ok(out)
}

/// One command section with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    section: &'static str,
    values: BTreeMap<String, Value>,
}

impl Params {
    pub fn defaults(section: &str) -> Result<Self, ConfigError> {
        Self::resolve(section, None)
    }

    fn resolve(section: &str, given: Option<&Table>) -> Result<Self, ConfigError> {
        let Some(&name) = SECTIONS.iter().find(|s| **s == section) else {
            return err(format!("key '{section}' is not a command section"));
        };
        let keys = section_keys(name);
        let mut values = BTreeMap::new();
        if let Some(t) = given {
            for (k, v) in t {
                let path = format!("{name}.{k}");
                let Some(spec) = keys.iter().find(|s| s.name == k) else {
                    return err(format!("unknown key '{path}'"));
                };
                values.insert(k.clone(), check_value(&path, spec, v)?);
            }
        }
        for k in keys {
            values.entry(k.name.to_string()).or_insert_with(|| default_value(k));
        }
        Ok(Self { section: name, values })
    }

    fn get(&self, name: &str) -> &Value {
        self.values
            .get(name)
            .unwrap_or_else(|| panic!("'{}.{name}' is not in the schema", self.section))
    }

    pub fn path(&self, name: &str) -> String {
        format!("{}.{name}", self.section)
    }

    pub fn int(&self, name: &str) -> i64 {
        self.get(name).as_integer().expect("validated integer")
    }

    pub fn usize(&self, name: &str) -> usize {
        self.int(name) as usize
    }

    pub fn float(&self, name: &str) -> f64 {
        as_number(self.get(name)).expect("validated float")
    }

    pub fn str(&self, name: &str) -> &str {
        self.get(name).as_str().expect("validated string")
    }

    pub fn rational(&self, name: &str) -> Rational64 {
        self.str(name).trim().parse().expect("validated rational")
    }

    pub fn ints(&self, name: &str) -> Vec<i64> {
        let arr = self.get(name).as_array().expect("validated array");
        arr.iter().map(|v| v.as_integer().expect("validated integer")).collect()
    }

    pub fn floats(&self, name: &str) -> Vec<f64> {
        let arr = self.get(name).as_array().expect("validated array");
        arr.iter().map(|v| as_number(v).expect("validated float")).collect()
    }

    pub fn phase_lists(&self, name: &str) -> Vec<Vec<f64>> {
        let arr = self.get(name).as_array().expect("validated array");
        arr.iter()
            .map(|row| row.as_array().expect("validated row").iter().filter_map(as_number).collect())
            .collect()
    }

    pub fn word(&self, name: &str) -> Vec<(usize, i8)> {
        let arr = self.get(name).as_array().expect("validated array");
        arr.iter()
            .map(|l| {
                let p = l.as_array().expect("validated pair");
                (p[0].as_integer().unwrap() as usize, p[1].as_integer().unwrap() as i8)
            })
            .collect()
    }

    pub fn to_json(&self) -> Json {
        serde_json::to_value(&self.values).expect("TOML values map to JSON")
    }
}

/// A validated run request.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub command: String,
    pub seed: u64,
    pub sections: BTreeMap<&'static str, Params>,
}

impl Scenario {
    /// Parses an optional TOML document for `command`; `seed` overrides the document's seed.
    pub fn load(command: &str, doc: Option<&str>, seed: Option<u64>) -> Result<Self, ConfigError> {
        if !COMMANDS.contains(&command) {
            return err(format!("key 'command' has unknown value '{command}'"));
        }
        let table: Table = match doc {
            Some(text) => text.parse().map_err(|e: toml::de::Error| {
                ConfigError(format!("malformed TOML: {}", e.message().lines().next().unwrap_or("")))
            })?,
            None => Table::new(),
        };
        let mut file_seed = None;
        for (k, v) in &table {
            match k.as_str() {
                "command" => {
                    let Some(c) = v.as_str() else { return err("key 'command' expects string") };
                    if !COMMANDS.contains(&c) {
                        return err(format!("key 'command' has unknown value '{c}'"));
                    }
                    if c != command {
                        return err(format!("key 'command' is '{c}' but the subcommand is '{command}'"));
                    }
                }
                "seed" => match v.as_integer() {
                    Some(s) if s >= 0 => file_seed = Some(s as u64),
                    _ => return err("key 'seed' expects a nonnegative integer"),
                },
                s if SECTIONS.contains(&s) => {
                    if !v.is_table() {
                        return err(format!("key '{s}' expects a table"));
                    }
                }
                other => return err(format!("unknown key '{other}'")),
            }
        }
        let mut sections = BTreeMap::new();
        for s in SECTIONS {
            if command == "all" || command == s {
                let given = table.get(s).and_then(Value::as_table);
                sections.insert(s, Params::resolve(s, given)?);
            }
        }
        Ok(Self {
            command: command.to_string(),
            seed: seed.or(file_seed).unwrap_or(DEFAULT_SEED as u64),
            sections,
        })
    }

    pub fn params(&self, section: &str) -> &Params {
        &self.sections[section]
    }

    pub fn to_json(&self) -> Json {
        let params: BTreeMap<&str, Json> = self.sections.iter().map(|(k, p)| (*k, p.to_json())).collect();
        json!({ "command": self.command, "seed": self.seed, "params": params })
    }
}

/// Every command and its keys with types, defaults and bounds.
pub fn schema() -> Json {
    let mut sections = BTreeMap::new();
    for s in SECTIONS {
        let keys: BTreeMap<&str, Json> = section_keys(s)
            .iter()
            .map(|k| {
                let mut entry = json!({
                    "type": k.kind.name(),
                    "default": serde_json::to_value(default_value(k)).expect("TOML maps to JSON"),
                    "doc": k.doc,
                });
                if let Some(min) = k.min {
                    entry["min"] = json!(min);
                }
                (k.name, entry)
            })
            .collect();
        sections.insert(s, keys);
    }
    json!({
        "commands": COMMANDS,
        "top_level": {
            "command": { "type": "string", "doc": "must match the subcommand when given" },
            "seed": { "type": "integer", "default": DEFAULT_SEED, "doc": "seed for pseudorandom inputs; --seed overrides" },
        },
        "sections": sections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse_and_validate() {
        for s in SECTIONS {
            let p = Params::defaults(s).unwrap();
            for k in section_keys(s) {
                check_value(&p.path(k.name), k, p.get(k.name)).unwrap();
            }
        }
    }

    #[test]
    fn unknown_and_mistyped_keys_name_the_key() {
        let e = Scenario::load("fock", Some("[fock]\nwindoww = 3\n"), None).unwrap_err();
        assert!(e.0.contains("fock.windoww"), "{e}");
        let e = Scenario::load("fock", Some("[fock]\nwindow = \"3\"\n"), None).unwrap_err();
        assert!(e.0.contains("fock.window"), "{e}");
        let e = Scenario::load("fock", Some("command = \"bogus\"\n"), None).unwrap_err();
        assert!(e.0.contains("command"), "{e}");
        assert!(Scenario::load("bogus", None, None).is_err());
        let e = Scenario::load("fock", Some("[fock]\nwindow = 0\n"), None).unwrap_err();
        assert!(e.0.contains("fock.window"), "{e}");
    }

    #[test]
    fn seed_precedence() {
        let doc = "seed = 3\n";
        assert_eq!(Scenario::load("moduli", Some(doc), None).unwrap().seed, 3);
        assert_eq!(Scenario::load("moduli", Some(doc), Some(9)).unwrap().seed, 9);
        assert_eq!(Scenario::load("moduli", None, None).unwrap().seed, DEFAULT_SEED as u64);
    }

    #[test]
    fn schema_lists_every_command() {
        let s = schema().to_string();
        for c in COMMANDS {
            assert!(s.contains(&format!("\"{c}\"")), "{c}");
        }
    }
}
