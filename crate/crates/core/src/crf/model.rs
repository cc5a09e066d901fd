use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};

use super::features::FeatureTemplates;
use super::lattice::{viterbi, Lattice, Transitions};
use crate::corpus::{token_labels_to_offsets, Label, SpanSet};
use crate::error::{Error, Result};
use crate::lexicon::Lexicon;
use crate::tokenize::{Token, Tokenizer};

const MAGIC: &str = "toxspan-crf";
const FORMAT_VERSION: u32 = 1;
/// Parameters before the first emission weight (the 2x2 transition matrix).
pub(crate) const TRANSITION_PARAMS: usize = 4;

/// Sparse feature occurrences of one position: `(feature index, value)`.
pub type CompiledPosition = Vec<(usize, f64)>;

/// A token sequence with features resolved against a model's feature index.
#[derive(Clone, Debug, PartialEq)]
pub struct Sequence {
    pub features: Vec<CompiledPosition>,
    pub labels: Vec<Label>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainingMeta {
    pub epochs_run: usize,
    pub best_epoch: usize,
    pub best_validation_loss: Option<f64>,
}

/// Linear-chain CRF over binary labels.
///
/// Parameters live in one flat vector: the four transition weights
/// `T[prev][next]` at `2 * prev + next`, then two emission weights per
/// feature at `4 + 2 * feature + label`. Gradients use the same layout.
#[derive(Clone, Debug, PartialEq)]
pub struct CrfModel {
    names: Vec<String>,
    index: HashMap<String, usize>,
    params: Vec<f64>,
    pub templates: FeatureTemplates,
    pub tokenizer: Tokenizer,
    pub l2_lambda: f64,
    /// Default span reconstruction mode for predictions.
    pub gap_fill: bool,
    pub meta: TrainingMeta,
}

impl Default for CrfModel {
    fn default() -> Self {
        Self::new(FeatureTemplates::default(), Tokenizer::default(), 0.0)
    }
}

impl CrfModel {
    /// All-zero model with no features.
    pub fn new(templates: FeatureTemplates, tokenizer: Tokenizer, l2_lambda: f64) -> Self {
        Self {
            names: Vec::new(),
            index: HashMap::new(),
            params: vec![0.0; TRANSITION_PARAMS],
            templates,
            tokenizer,
            l2_lambda,
            gap_fill: true,
            meta: TrainingMeta::default(),
        }
    }

    pub fn feature_count(&self) -> usize {
        self.names.len()
    }

    pub fn feature_names(&self) -> &[String] {
        &self.names
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn set_param(&mut self, i: usize, value: f64) {
        assert!(value.is_finite(), "non-finite weight");
        self.params[i] = value;
    }

    pub(crate) fn set_params(&mut self, params: Vec<f64>) {
        assert_eq!(params.len(), self.params.len());
        assert!(params.iter().all(|v| v.is_finite()), "non-finite weight");
        self.params = params;
    }

    pub fn emission_param(feature: usize, label: Label) -> usize {
        TRANSITION_PARAMS + 2 * feature + label.index()
    }

    pub fn transition_param(prev: Label, next: Label) -> usize {
        2 * prev.index() + next.index()
    }

    pub fn transitions(&self) -> Transitions {
        [
            [self.params[0], self.params[1]],
            [self.params[2], self.params[3]],
        ]
    }

    pub fn set_transition(&mut self, prev: Label, next: Label, w: f64) {
        self.set_param(Self::transition_param(prev, next), w);
    }

    pub fn emission_weight(&self, feature: &str, label: Label) -> f64 {
        self.feature_index(feature)
            .map_or(0.0, |f| self.params[Self::emission_param(f, label)])
    }

    /// Sets one emission weight, registering the feature if needed.
    pub fn set_emission_weight(&mut self, feature: &str, label: Label, w: f64) {
        let f = self.intern(feature);
        self.set_param(Self::emission_param(f, label), w);
    }

    /// Index of `name`, adding it with zero weights if unseen.
    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.params.extend([0.0, 0.0]);
        i
    }

    fn compile_with(
        &self,
        tokens: &[Token],
        lexicon: Option<&Lexicon>,
        mut resolve: impl FnMut(&str) -> Option<usize>,
    ) -> Result<Vec<CompiledPosition>> {
        (0..tokens.len())
            .map(|i| {
                let fv = self.templates.extract(tokens, i, lexicon)?;
                Ok(fv
                    .iter()
                    .filter_map(|(id, v)| resolve(id).map(|f| (f, v)))
                    .collect())
            })
            .collect()
    }

    /// Resolves features of every position; unknown features are dropped.
    pub fn compile(
        &self,
        tokens: &[Token],
        lexicon: Option<&Lexicon>,
    ) -> Result<Vec<CompiledPosition>> {
        self.compile_with(tokens, lexicon, |id| self.feature_index(id))
    }

    /// Like [`CrfModel::compile`] but registers unseen features.
    pub fn compile_registering(
        &mut self,
        tokens: &[Token],
        lexicon: Option<&Lexicon>,
    ) -> Result<Vec<CompiledPosition>> {
        let mut names = Vec::new();
        let mut positions = Vec::with_capacity(tokens.len());
        for i in 0..tokens.len() {
            let fv = self.templates.extract(tokens, i, lexicon)?;
            names.clear();
            names.extend(fv.iter().map(|(id, v)| (id.to_string(), v)));
            positions.push(names.iter().map(|(id, v)| (self.intern(id), *v)).collect());
        }
        Ok(positions)
    }

    pub(crate) fn emissions_for(params: &[f64], positions: &[CompiledPosition]) -> Vec<[f64; 2]> {
        positions
            .iter()
            .map(|feats| {
                let mut e = [0.0; 2];
                for &(f, v) in feats {
                    e[0] += params[TRANSITION_PARAMS + 2 * f] * v;
                    e[1] += params[TRANSITION_PARAMS + 2 * f + 1] * v;
                }
                e
            })
            .collect()
    }

    /// Emission scores for `tokens` under the current weights.
    pub fn build_lattice(&self, tokens: &[Token], lexicon: Option<&Lexicon>) -> Result<Lattice> {
        if tokens.is_empty() {
            return Err(Error::EmptyInput("cannot build a lattice for zero tokens"));
        }
        let positions = self.compile(tokens, lexicon)?;
        Lattice::new(
            Self::emissions_for(&self.params, &positions),
            self.transitions(),
        )
    }

    /// Viterbi labels for the tokens of `text`.
    pub fn label_tokens(&self, tokens: &[Token], lexicon: Option<&Lexicon>) -> Result<Vec<Label>> {
        if tokens.is_empty() {
            return Ok(Vec::new());
        }
        Ok(viterbi(&self.build_lattice(tokens, lexicon)?).0)
    }

    /// Predicted toxic character offsets for `text`.
    pub fn predict(&self, text: &str, lexicon: Option<&Lexicon>, gap_fill: bool) -> SpanSet {
        let tokens = self.tokenizer.tokenize(text);
        let labels = self
            .label_tokens(&tokens, lexicon)
            .expect("model weights are finite");
        token_labels_to_offsets(&tokens, &labels, gap_fill).expect("labels match tokens")
    }

    /// Writes the versioned text format. Zero emission weights are omitted.
    pub fn save<W: Write>(&self, mut sink: W) -> Result<()> {
        let intra: Vec<String> = self
            .tokenizer
            .intra_word()
            .map(|c| format!("{:x}", c as u32))
            .collect();
        let best_val = self
            .meta
            .best_validation_loss
            .map_or_else(|| "none".to_string(), |v| v.to_string());
        writeln!(
            sink,
            "{MAGIC}\tversion={FORMAT_VERSION}\tlambda={}\taffix={}\tcontext={}\tlexicon={}\tintra_word={}\tgap_fill={}\tepochs_run={}\tbest_epoch={}\tbest_val_loss={}",
            self.l2_lambda,
            self.templates.max_affix,
            self.templates.context as u8,
            self.templates.lexicon as u8,
            intra.join(","),
            self.gap_fill as u8,
            self.meta.epochs_run,
            self.meta.best_epoch,
            best_val,
        )?;
        for p in Label::ALL {
            for q in Label::ALL {
                let w = self.params[Self::transition_param(p, q)];
                writeln!(sink, "T\t{}\t{}\t{w}", p.index(), q.index())?;
            }
        }
        let mut order: Vec<usize> = (0..self.names.len()).collect();
        order.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        for f in order {
            for y in Label::ALL {
                let w = self.params[Self::emission_param(f, y)];
                if w != 0.0 {
                    writeln!(sink, "{}\t{}\t{w}", self.names[f], y.index())?;
                }
            }
        }
        sink.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(source: R) -> Result<Self> {
        let mut lines = BufReader::new(source).lines().enumerate();
        let bad = |line: usize, message: String| Error::ModelFormat { line, message };
        let header = match lines.next() {
            Some((_, l)) => l?,
            None => return Err(bad(1, "empty model file".into())),
        };
        let mut fields = header.split('\t');
        if fields.next() != Some(MAGIC) {
            return Err(bad(1, format!("not a {MAGIC} model")));
        }
        let kv: HashMap<&str, &str> = fields.filter_map(|f| f.split_once('=')).collect();
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| bad(1, format!("missing header field `{k}`")))
        };
        let num = |k: &str| -> Result<f64> {
            get(k)?
                .parse::<f64>()
                .map_err(|_| bad(1, format!("bad value for `{k}`")))
        };
        let int = |k: &str| -> Result<usize> {
            get(k)?
                .parse::<usize>()
                .map_err(|_| bad(1, format!("bad value for `{k}`")))
        };
        let flag = |k: &str| -> Result<bool> {
            match get(k)? {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(bad(1, format!("bad value for `{k}`"))),
            }
        };
        let version = int("version")?;
        if version != FORMAT_VERSION as usize {
            return Err(bad(1, format!("unsupported format version {version}")));
        }
        let intra = get("intra_word")?;
        let intra_chars = intra
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|h| {
                u32::from_str_radix(h, 16)
                    .ok()
                    .and_then(char::from_u32)
                    .ok_or_else(|| bad(1, format!("bad intra-word code point `{h}`")))
            })
            .collect::<Result<Vec<char>>>()?;
        let templates = FeatureTemplates {
            max_affix: int("affix")?,
            context: flag("context")?,
            lexicon: flag("lexicon")?,
        };
        let lambda = num("lambda")?;
        let mut model = CrfModel::new(templates, Tokenizer::with_intra_word(intra_chars), lambda);
        model.gap_fill = flag("gap_fill")?;
        model.meta = TrainingMeta {
            epochs_run: int("epochs_run")?,
            best_epoch: int("best_epoch")?,
            best_validation_loss: match get("best_val_loss")? {
                "none" => None,
                _ => Some(num("best_val_loss")?),
            },
        };

        for (i, line) in lines {
            let line = line?;
            let lineno = i + 1;
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('\t').collect();
            let label = |s: &str| {
                s.parse::<usize>()
                    .ok()
                    .and_then(Label::from_index)
                    .ok_or_else(|| bad(lineno, format!("bad label `{s}`")))
            };
            let weight = |s: &str| match s.parse::<f64>() {
                Ok(w) if w.is_finite() => Ok(w),
                _ => Err(bad(lineno, format!("bad weight `{s}`"))),
            };
            match parts.as_slice() {
                ["T", p, q, w] => model.set_transition(label(p)?, label(q)?, weight(w)?),
                [name, y, w] => model.set_emission_weight(name, label(y)?, weight(w)?),
                _ => return Err(bad(lineno, "expected 3 or 4 tab-separated fields".into())),
            }
        }
        Ok(model)
    }
}
