use std::fmt;

use crate::filters::Verdict;
use crate::ultrapower::UltrapowerModel;

use super::enumerate::{enumerate_sentences, SentenceBounds, PRUNING_RULES};
use super::formula::Formula;
use super::eval::{eval_base, eval_collapsed, eval_star, StarValuation, Valuation};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TransferLine {
    pub sentence: String,
    pub base: bool,
    pub star: Verdict,
    /// Truth in the collapsed quotient, in the all-principal regime.
    pub collapsed: Option<Verdict>,
}

impl TransferLine {
    pub fn agrees(&self) -> bool {
        let expected = Verdict::from_bool(self.base);
        self.star == expected && self.collapsed.map_or(true, |c| c == expected)
    }
}

impl fmt::Display for TransferLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", Verdict::from_bool(self.base), self.star, self.sentence)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransferReport {
    pub lines: Vec<TransferLine>,
    pub pruning: Vec<String>,
}

impl TransferReport {
    pub fn sentences(&self) -> usize {
        self.lines.len()
    }

    pub fn undecidable(&self) -> usize {
        self.lines
            .iter()
            .filter(|l| l.star == Verdict::Undecidable)
            .count()
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &TransferLine> {
        self.lines.iter().filter(|l| !l.agrees())
    }

    pub fn counterexample_count(&self) -> usize {
        self.counterexamples().count()
    }

    /// Combines two reports; the result does not depend on the order of
    /// the operands.
    pub fn merge(mut self, other: TransferReport) -> TransferReport {
        self.lines.extend(other.lines);
        self.lines.sort();
        for rule in other.pruning {
            if !self.pruning.contains(&rule) {
                self.pruning.push(rule);
            }
        }
        self.pruning.sort();
        self
    }

    /// Summary followed by every counterexample, then one line per sentence.
    pub fn render(&self) -> String {
        let mut out = format!(
            "{} sentences, {} counterexamples, {} undecidable\n",
            self.sentences(),
            self.counterexample_count(),
            self.undecidable()
        );
        for rule in &self.pruning {
            out.push_str(&format!("pruning: {rule}\n"));
        }
        for line in self.counterexamples() {
            out.push_str(&format!("counterexample: {line}"));
            if let Some(c) = line.collapsed {
                out.push_str(&format!(" (collapsed {c})"));
            }
            out.push('\n');
        }
        for line in &self.lines {
            out.push_str(&format!("{line}\n"));
        }
        out
    }
}

/// Checks every sentence within `bounds` for agreement between the base
/// structure and the ultrapower. In the all-principal regime each sentence
/// is also evaluated through the principal collapse.
pub fn transfer_check(
    model: &UltrapowerModel,
    bounds: &SentenceBounds,
) -> Result<TransferReport, LogicError> {
    transfer_check_sentences(model, &enumerate_sentences(bounds))
}

/// [`transfer_check`] over sentences enumerated by the caller, so one
/// enumeration can serve many arrays.
pub fn transfer_check_sentences(
    model: &UltrapowerModel,
    sentences: &[Formula],
) -> Result<TransferReport, LogicError> {
    let collapsed = model.array().all_principal();
    let mut lines = Vec::with_capacity(sentences.len());
    for sentence in sentences {
        let base = eval_base(model.base(), sentence, &Valuation::new())?;
        let star = eval_star(model, sentence, &StarValuation::new())?;
        let collapsed = if collapsed {
            Some(eval_collapsed(model, sentence, &StarValuation::new())?)
        } else {
            None
        };
        lines.push(TransferLine {
            sentence: sentence.to_string(),
            base,
            star,
            collapsed,
        });
    }
    Ok(TransferReport {
        lines,
        pruning: PRUNING_RULES.iter().map(|s| s.to_string()).collect(),
    })
}
