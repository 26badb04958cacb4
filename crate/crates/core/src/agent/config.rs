use std::collections::BTreeMap;

use crate::error::ParseError;

/// DQN hyperparameters. The text form is one `key = value` per line with
/// `#` comments; see [`TrainConfig::KEYS`].
#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub lr: f64,
    pub decay: f64,
    pub rms_eps: f64,
    pub total_steps: usize,
    pub replay_capacity: usize,
    pub batch: usize,
    pub discount: f64,
    pub epsilon: f64,
    pub degree_cap: usize,
    pub horizon: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub width: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr: 1e-5,
            decay: 0.99,
            rms_eps: 1e-8,
            total_steps: 20_000,
            replay_capacity: 100,
            batch: 32,
            discount: 0.99,
            epsilon: 0.1,
            degree_cap: 2,
            horizon: 100,
            n_min: 25,
            n_max: 25,
            p_min: 0.5,
            p_max: 1.0,
            width: 500,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub const KEYS: [&'static str; 17] = [
        "lr",
        "decay",
        "rms_eps",
        "total_steps",
        "replay_capacity",
        "batch",
        "discount",
        "epsilon",
        "degree_cap",
        "horizon",
        "graph_n",
        "n_min",
        "n_max",
        "p_min",
        "p_max",
        "width",
        "seed",
    ];

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ParseError> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, ParseError> {
            v.parse().map_err(|_| ParseError::Config(format!("bad value {v:?} for {key}")))
        }
        let v = value.trim();
        match key.trim() {
            "lr" => self.lr = num(key, v)?,
            "decay" => self.decay = num(key, v)?,
            "rms_eps" => self.rms_eps = num(key, v)?,
            "total_steps" => self.total_steps = num(key, v)?,
            "replay_capacity" => self.replay_capacity = num(key, v)?,
            "batch" => self.batch = num(key, v)?,
            "discount" => self.discount = num(key, v)?,
            "epsilon" => self.epsilon = num(key, v)?,
            "degree_cap" => self.degree_cap = num(key, v)?,
            "horizon" => self.horizon = num(key, v)?,
            "graph_n" => {
                self.n_min = num(key, v)?;
                self.n_max = self.n_min;
            }
            "n_min" => self.n_min = num(key, v)?,
            "n_max" => self.n_max = num(key, v)?,
            "p_min" => self.p_min = num(key, v)?,
            "p_max" => self.p_max = num(key, v)?,
            "width" => self.width = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            other => return Err(ParseError::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut c = Self::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| ParseError::Config(format!("line {}: expected key = value", i + 1)))?;
            c.set(k, v)?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ParseError> {
        let bad = |m: &str| Err(ParseError::Config(m.to_string()));
        if !(self.lr > 0.0) || !(self.rms_eps > 0.0) {
            return bad("lr and rms_eps must be positive");
        }
        if !(0.0..1.0).contains(&self.decay) || !(0.0..=1.0).contains(&self.discount) {
            return bad("decay must lie in [0, 1) and discount in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon must lie in [0, 1]");
        }
        if self.total_steps == 0 || self.replay_capacity == 0 || self.batch == 0 || self.horizon == 0 {
            return bad("total_steps, replay_capacity, batch and horizon must be positive");
        }
        if self.degree_cap == 0 || self.width == 0 {
            return bad("degree_cap and width must be positive");
        }
        if self.n_min < 2 || self.n_min > self.n_max {
            return bad("need 2 <= n_min <= n_max");
        }
        if !(0.0..=1.0).contains(&self.p_min) || !(self.p_min..=1.0).contains(&self.p_max) {
            return bad("need 0 <= p_min <= p_max <= 1");
        }
        Ok(())
    }

    /// Every field as text, for manifests and model headers.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("lr", self.lr.to_string()),
            ("decay", self.decay.to_string()),
            ("rms_eps", self.rms_eps.to_string()),
            ("total_steps", self.total_steps.to_string()),
            ("replay_capacity", self.replay_capacity.to_string()),
            ("batch", self.batch.to_string()),
            ("discount", self.discount.to_string()),
            ("epsilon", self.epsilon.to_string()),
            ("degree_cap", self.degree_cap.to_string()),
            ("horizon", self.horizon.to_string()),
            ("n_min", self.n_min.to_string()),
            ("n_max", self.n_max.to_string()),
            ("p_min", self.p_min.to_string()),
            ("p_max", self.p_max.to_string()),
            ("width", self.width.to_string()),
            ("seed", self.seed.to_string()),
        ];
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    pub fn to_text(&self) -> String {
        self.to_map().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_round_trip() {
        let c = TrainConfig::parse("# desk\ngraph_n = 6\ntotal_steps=500\n lr = 1e-4 # faster\n").unwrap();
        assert_eq!((c.n_min, c.n_max, c.total_steps, c.lr), (6, 6, 500, 1e-4));
        assert_eq!(TrainConfig::parse(&c.to_text()).unwrap(), c);
        assert!(TrainConfig::parse("bogus = 1").is_err());
        assert!(TrainConfig::parse("epsilon = 2").is_err());
        assert!(TrainConfig::parse("lr").is_err());
    }
}
