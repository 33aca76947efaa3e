use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::behaviors::AlarmResponse;
use crate::error::{Error, Result};
use crate::field::StencilMode;
use crate::scenarios::{GaussianPheromone, Group, MapLayout, PredatorMode, TrailPheromone};
use crate::sim::{ScenarioKind, SimConfig};
use crate::Real;

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

fn num<T: FromStr>(v: &str, key: &str, line: usize) -> Result<T> {
    v.parse()
        .map_err(|_| syntax(line, format!("cannot parse `{v}` as a value for `{key}`")))
}

fn word<T>(v: &str, key: &str, line: usize, parse: impl Fn(&str) -> Option<T>) -> Result<T> {
    parse(v).ok_or_else(|| syntax(line, format!("invalid value `{v}` for `{key}`")))
}

/// Gaussian keys seen so far; a missing `scale_k` means unit peak.
#[derive(Default)]
struct GaussSeen {
    scale_k: bool,
}

struct Parser<'a> {
    cfg: SimConfig,
    base: Option<&'a Path>,
    agp: GaussSeen,
    alp: GaussSeen,
    approach_time: Option<Real>,
    predator_speed: Option<Real>,
    predator_mode: Option<String>,
}

impl Parser<'_> {
    fn set(&mut self, section: &str, key: &str, v: &str, line: usize) -> Result<()> {
        let c = &mut self.cfg;
        match (section, key) {
            ("sim", "scenario") => c.scenario = word(v, key, line, ScenarioKind::parse)?,
            ("sim", "seed") => c.seed = num(v, key, line)?,
            ("sim", "dt") => c.dt = num(v, key, line)?,
            ("sim", "arena_width") => c.arena_width = num(v, key, line)?,
            ("sim", "arena_height") => c.arena_height = num(v, key, line)?,
            ("sim", "cell_size") => c.cell_size = num(v, key, line)?,
            ("sim", "stencil") => c.stencil = word(v, key, line, StencilMode::parse)?,
            ("sim", "sensor_noise") => c.sensor_noise = num(v, key, line)?,
            ("sim", "frame_stride") => c.frame_stride = num(v, key, line)?,

            ("robot", "diameter") => c.body.diameter = num(v, key, line)?,
            ("robot", "wheelbase") => c.body.wheelbase = num(v, key, line)?,
            ("robot", "sensor_radius") => c.body.sensor_radius = num(v, key, line)?,
            ("robot", "sensor_array_offset") => c.body.sensor_array_offset = num(v, key, line)?,
            ("robot", "bumper_range") => c.body.bumper_range = num(v, key, line)?,

            ("behavior", "trail_p") => c.behavior.trail_p = num(v, key, line)?,
            ("behavior", "heading_p") => c.behavior.heading_p = num(v, key, line)?,
            ("behavior", "base_speed") => c.behavior.base_speed_vb = num(v, key, line)?,
            ("behavior", "max_speed") => c.behavior.max_speed = num(v, key, line)?,
            ("behavior", "presence_tau") => c.behavior.presence_tau = num(v, key, line)?,
            ("behavior", "gradient_eps") => c.behavior.gradient_eps = num(v, key, line)?,
            ("behavior", "wander_jitter") => c.behavior.wander_jitter = num(v, key, line)?,
            ("behavior", "avoid_turn_min") => c.behavior.avoid_turn_min = num(v, key, line)?,
            ("behavior", "avoid_turn_max") => c.behavior.avoid_turn_max = num(v, key, line)?,
            ("behavior", "cyan_preference") => c.behavior.cyan_preference = num(v, key, line)?,
            ("behavior", "latch_release") => c.behavior.latch_release = num(v, key, line)?,
            ("behavior", "alarm_response") => {
                c.behavior.alarm_response = word(v, key, line, AlarmResponse::parse)?
            }

            ("case1", "map") => {
                if v == "default" {
                    c.case1.layout = MapLayout::default_layout();
                    c.case1.map_source = "default".into();
                } else {
                    let path = match self.base {
                        Some(b) if Path::new(v).is_relative() => b.join(v),
                        _ => PathBuf::from(v),
                    };
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    c.case1.layout = MapLayout::parse(&text)?;
                    c.case1.map_source = path.display().to_string();
                }
            }
            ("case1", "group") => c.case1.group = word(v, key, line, Group::parse)?,
            ("case1", "food") => {
                let mut set = BTreeSet::new();
                for tok in v.split(|ch: char| ch == ',' || ch.is_whitespace()) {
                    if !tok.is_empty() {
                        set.insert(num::<u32>(tok, key, line)?);
                    }
                }
                c.case1.food_endpoints = set;
            }
            ("case1", "trials") => c.case1.trials = num(v, key, line)?,
            ("case1", "trail_width") => c.case1.trail_width = num(v, key, line)?,
            ("case1", "srp_length") => c.case1.srp_length = num(v, key, line)?,
            ("case1", "trial_timeout") => c.case1.trial_timeout = num(v, key, line)?,
            ("case1", "arrival_radius") => c.case1.arrival_radius = num(v, key, line)?,
            ("case1", "start_jitter") => c.case1.start_jitter = num(v, key, line)?,
            ("case1", "warmup_max") => c.case1.warmup_max = num(v, key, line)?,
            ("case1.lap" | "case1.sap" | "case1.srp", _) => {
                let p = match section {
                    "case1.lap" => &mut c.case1.lap,
                    "case1.sap" => &mut c.case1.sap,
                    _ => &mut c.case1.srp,
                };
                set_trail(p, key, v, line)?;
            }

            ("case2", "duration") => c.case2.duration = num(v, key, line)?,
            ("case2", "followers") => c.case2.followers = num(v, key, line)?,
            ("case2", "leader_speed") => c.case2.leader_speed = num(v, key, line)?,
            ("case2", "alarm_trigger_distance") => {
                c.case2.alarm_trigger_distance = num(v, key, line)?
            }
            ("case2", "source_merge_radius") => c.case2.source_merge_radius = num(v, key, line)?,
            ("case2", "start_distance_min") => c.case2.start_distance.0 = num(v, key, line)?,
            ("case2", "start_distance_max") => c.case2.start_distance.1 = num(v, key, line)?,
            ("case2", "predator") => {
                if v != "scripted" && v != "wander" {
                    return Err(syntax(line, format!("invalid value `{v}` for `predator`")));
                }
                self.predator_mode = Some(v.to_string());
            }
            ("case2", "approach_time") => self.approach_time = Some(num(v, key, line)?),
            ("case2", "predator_speed") => self.predator_speed = Some(num(v, key, line)?),
            ("case2.agp" | "case2.alp", _) => {
                let (p, seen) = if section == "case2.agp" {
                    (&mut c.case2.agp, &mut self.agp)
                } else {
                    (&mut c.case2.alp, &mut self.alp)
                };
                set_gauss(p, seen, key, v, line)?;
            }
            _ => {
                return Err(Error::UnknownKey {
                    key: format!("{section}.{key}"),
                    line,
                })
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<SimConfig> {
        let c = &mut self.cfg;
        for (p, seen) in [(&mut c.case2.agp, &self.agp), (&mut c.case2.alp, &self.alp)] {
            if !seen.scale_k {
                p.scale_k = 2.0
                    * std::f64::consts::PI
                    * p.sigma_x
                    * p.sigma_y
                    * (1.0 - p.rho * p.rho).sqrt();
            }
        }
        let (def_time, def_speed) = match c.case2.predator {
            PredatorMode::Scripted {
                approach_time,
                speed,
            } => (approach_time, speed),
            PredatorMode::Wander => (60.0, 10.0),
        };
        let scripted = match self.predator_mode.as_deref() {
            Some("wander") => false,
            Some(_) => true,
            None => matches!(c.case2.predator, PredatorMode::Scripted { .. }),
        };
        c.case2.predator = if scripted {
            PredatorMode::Scripted {
                approach_time: self.approach_time.unwrap_or(def_time),
                speed: self.predator_speed.unwrap_or(def_speed),
            }
        } else {
            PredatorMode::Wander
        };
        c.validate()?;
        Ok(self.cfg)
    }
}

fn set_trail(p: &mut TrailPheromone, key: &str, v: &str, line: usize) -> Result<()> {
    match key {
        "evaporation" => p.evaporation_e = num(v, key, line)?,
        "diffusion" => p.diffusion_d = num(v, key, line)?,
        "injection" => p.injection_rate = num(v, key, line)?,
        _ => {
            return Err(Error::UnknownKey {
                key: key.into(),
                line,
            })
        }
    }
    Ok(())
}

fn set_gauss(
    p: &mut GaussianPheromone,
    seen: &mut GaussSeen,
    key: &str,
    v: &str,
    line: usize,
) -> Result<()> {
    match key {
        "evaporation" => p.evaporation_e = num(v, key, line)?,
        "sigma" => {
            p.sigma_x = num(v, key, line)?;
            p.sigma_y = p.sigma_x;
        }
        "sigma_x" => p.sigma_x = num(v, key, line)?,
        "sigma_y" => p.sigma_y = num(v, key, line)?,
        "rho" => p.rho = num(v, key, line)?,
        "scale_k" => {
            p.scale_k = num(v, key, line)?;
            seen.scale_k = true;
        }
        _ => {
            return Err(Error::UnknownKey {
                key: key.into(),
                line,
            })
        }
    }
    Ok(())
}

const SECTIONS: [&str; 10] = [
    "sim",
    "robot",
    "behavior",
    "case1",
    "case1.lap",
    "case1.sap",
    "case1.srp",
    "case2",
    "case2.agp",
    "case2.alp",
];

/// Parses a configuration file; every key not given keeps its default.
///
/// The format is line based: `[section]` headers, `key = value` pairs and
/// `#` comments. Map paths are taken relative to the working directory.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    parse_config_in(text, None)
}

/// Like [`parse_config`], resolving relative map paths against `base`.
pub fn parse_config_in(text: &str, base: Option<&Path>) -> Result<SimConfig> {
    let mut p = Parser {
        cfg: SimConfig::default(),
        base,
        agp: GaussSeen::default(),
        alp: GaussSeen::default(),
        approach_time: None,
        predator_speed: None,
        predator_mode: None,
    };
    let mut section = "sim".to_string();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        if let Some(rest) = l.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| syntax(line, "unterminated section header"))?
                .trim();
            if !SECTIONS.contains(&name) {
                return Err(Error::UnknownKey {
                    key: format!("[{name}]"),
                    line,
                });
            }
            section = name.to_string();
            continue;
        }
        let (k, v) = l
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("expected `key = value`, got `{l}`")))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(syntax(line, "empty key"));
        }
        p.set(&section, k, v, line)?;
    }
    p.finish()
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<SimConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_in(&text, path.parent())
}

/// Writes every setting, so the output parses back to an identical configuration.
pub fn serialize_config(c: &SimConfig) -> String {
    let mut s = String::new();
    let mut w = |line: String| {
        s.push_str(&line);
        s.push('\n');
    };
    w("[sim]".into());
    w(format!("scenario = {}", c.scenario));
    w(format!("seed = {}", c.seed));
    w(format!("dt = {}", c.dt));
    w(format!("arena_width = {}", c.arena_width));
    w(format!("arena_height = {}", c.arena_height));
    w(format!("cell_size = {}", c.cell_size));
    w(format!("stencil = {}", c.stencil.name()));
    w(format!("sensor_noise = {}", c.sensor_noise));
    w(format!("frame_stride = {}", c.frame_stride));

    w(String::new());
    w("[robot]".into());
    w(format!("diameter = {}", c.body.diameter));
    w(format!("wheelbase = {}", c.body.wheelbase));
    w(format!("sensor_radius = {}", c.body.sensor_radius));
    w(format!(
        "sensor_array_offset = {}",
        c.body.sensor_array_offset
    ));
    w(format!("bumper_range = {}", c.body.bumper_range));

    let b = &c.behavior;
    w(String::new());
    w("[behavior]".into());
    w(format!("trail_p = {}", b.trail_p));
    w(format!("heading_p = {}", b.heading_p));
    w(format!("base_speed = {}", b.base_speed_vb));
    w(format!("max_speed = {}", b.max_speed));
    w(format!("presence_tau = {}", b.presence_tau));
    w(format!("gradient_eps = {}", b.gradient_eps));
    w(format!("wander_jitter = {}", b.wander_jitter));
    w(format!("avoid_turn_min = {}", b.avoid_turn_min));
    w(format!("avoid_turn_max = {}", b.avoid_turn_max));
    w(format!("cyan_preference = {}", b.cyan_preference));
    w(format!("latch_release = {}", b.latch_release));
    w(format!("alarm_response = {}", b.alarm_response.name()));

    let c1 = &c.case1;
    w(String::new());
    w("[case1]".into());
    w(format!("map = {}", c1.map_source));
    w(format!("group = {}", c1.group));
    let food: Vec<String> = c1.food_endpoints.iter().map(u32::to_string).collect();
    w(format!("food = {}", food.join(" ")));
    w(format!("trials = {}", c1.trials));
    w(format!("trail_width = {}", c1.trail_width));
    w(format!("srp_length = {}", c1.srp_length));
    w(format!("trial_timeout = {}", c1.trial_timeout));
    w(format!("arrival_radius = {}", c1.arrival_radius));
    w(format!("start_jitter = {}", c1.start_jitter));
    w(format!("warmup_max = {}", c1.warmup_max));
    for (name, p) in [("lap", &c1.lap), ("sap", &c1.sap), ("srp", &c1.srp)] {
        w(String::new());
        w(format!("[case1.{name}]"));
        w(format!("evaporation = {}", p.evaporation_e));
        w(format!("diffusion = {}", p.diffusion_d));
        w(format!("injection = {}", p.injection_rate));
    }

    let c2 = &c.case2;
    w(String::new());
    w("[case2]".into());
    w(format!("duration = {}", c2.duration));
    w(format!("followers = {}", c2.followers));
    w(format!("leader_speed = {}", c2.leader_speed));
    w(format!(
        "alarm_trigger_distance = {}",
        c2.alarm_trigger_distance
    ));
    w(format!("source_merge_radius = {}", c2.source_merge_radius));
    w(format!("start_distance_min = {}", c2.start_distance.0));
    w(format!("start_distance_max = {}", c2.start_distance.1));
    match c2.predator {
        PredatorMode::Wander => w("predator = wander".into()),
        PredatorMode::Scripted {
            approach_time,
            speed,
        } => {
            w("predator = scripted".into());
            w(format!("approach_time = {approach_time}"));
            w(format!("predator_speed = {speed}"));
        }
    }
    for (name, p) in [("agp", &c2.agp), ("alp", &c2.alp)] {
        w(String::new());
        w(format!("[case2.{name}]"));
        w(format!("evaporation = {}", p.evaporation_e));
        w(format!("sigma_x = {}", p.sigma_x));
        w(format!("sigma_y = {}", p.sigma_y));
        w(format!("rho = {}", p.rho));
        w(format!("scale_k = {}", p.scale_k));
    }
    let _ = writeln!(s);
    s.pop();
    s
}
