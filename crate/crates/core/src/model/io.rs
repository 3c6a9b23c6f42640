//! Flat text persistence for trained models.
//!
//! Format (whitespace-separated, full-precision floats):
//!
//! ```text
//! tabattr-mlp v1
//! features <M> hidden <H> outputs <C> classes <K> kind <sigmoid|softmax>
//! w1 <M*H values, row-major>
//! b1 <H values>
//! w2 <H*C values, row-major>
//! b2 <C values>
//! ```

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{MLPModel, OutputKind};
use crate::numerics::Matrix;

impl MLPModel {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "tabattr-mlp v1")?;
        writeln!(
            out,
            "features {} hidden {} outputs {} classes {} kind {}",
            self.n_features(),
            self.n_hidden(),
            self.n_outputs(),
            self.n_classes,
            match self.output {
                OutputKind::SigmoidBinary => "sigmoid",
                OutputKind::SoftmaxMulticlass => "softmax",
            }
        )?;
        write_block(&mut out, "w1", self.w1.data())?;
        write_block(&mut out, "b1", &self.b1)?;
        write_block(&mut out, "w2", self.w2.data())?;
        write_block(&mut out, "b2", &self.b2)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MLPModel> {
        let file = std::fs::File::open(path)?;
        let mut lines = std::io::BufReader::new(file).lines();
        let mut next_line = || -> Result<String> {
            lines
                .next()
                .transpose()?
                .ok_or_else(|| Error::Format("model file truncated".into()))
        };

        let magic = next_line()?;
        if magic.trim() != "tabattr-mlp v1" {
            return Err(Error::Format(format!("unknown model header '{magic}'")));
        }
        let header = next_line()?;
        let tokens: Vec<&str> = header.split_whitespace().collect();
        if tokens.len() != 10
            || tokens[0] != "features"
            || tokens[2] != "hidden"
            || tokens[4] != "outputs"
            || tokens[6] != "classes"
            || tokens[8] != "kind"
        {
            return Err(Error::Format(format!("bad shape header '{header}'")));
        }
        let parse_count = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::Format(format!("bad count '{s}' in shape header")))
        };
        let features = parse_count(tokens[1])?;
        let hidden = parse_count(tokens[3])?;
        let outputs = parse_count(tokens[5])?;
        let classes = parse_count(tokens[7])?;
        let kind = match tokens[9] {
            "sigmoid" => OutputKind::SigmoidBinary,
            "softmax" => OutputKind::SoftmaxMulticlass,
            other => return Err(Error::Format(format!("unknown output kind '{other}'"))),
        };

        let w1 = read_block(&next_line()?, "w1", features * hidden)?;
        let b1 = read_block(&next_line()?, "b1", hidden)?;
        let w2 = read_block(&next_line()?, "w2", hidden * outputs)?;
        let b2 = read_block(&next_line()?, "b2", outputs)?;

        MLPModel::new(
            Matrix::from_vec(features, hidden, w1)?,
            b1,
            Matrix::from_vec(hidden, outputs, w2)?,
            b2,
            kind,
            classes,
        )
    }
}

fn write_block(out: &mut impl Write, tag: &str, values: &[f64]) -> Result<()> {
    write!(out, "{tag}")?;
    for v in values {
        write!(out, " {v}")?;
    }
    writeln!(out)?;
    Ok(())
}

fn read_block(line: &str, tag: &str, expected: usize) -> Result<Vec<f64>> {
    let mut parts = line.split_whitespace();
    match parts.next() {
        Some(t) if t == tag => {}
        other => {
            return Err(Error::Format(format!(
                "expected block '{tag}', found '{}'",
                other.unwrap_or("<eof>")
            )))
        }
    }
    let values: Vec<f64> = parts
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Format(format!("bad float '{s}' in block '{tag}'")))
        })
        .collect::<Result<_>>()?;
    if values.len() != expected {
        return Err(Error::Format(format!(
            "block '{tag}' holds {} values, expected {expected}",
            values.len()
        )));
    }
    Ok(values)
}
