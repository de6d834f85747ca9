//! Value and operation extraction from OCR text.

use payscan::extract::{extract_value, match_operation, ExtractConfig};
use payscan::ocr::OcrResult;

fn main() -> payscan::Result<()> {
    let cfg = ExtractConfig::default().normalized()?;
    for text in ["VALOR: 1.234,56", "TOTAL R$ 12 , 50", "CREDIT0", "DIGITE SUA SENHA", "1,234,56", "VOUCHEP 3.50"] {
        let ocr = OcrResult::uniform(text, 90);
        let value = extract_value(&ocr);
        let op = match_operation(&ocr, &cfg);
        println!("{text:<20} value {:<24} operation {} ({:.1})",
            format!("{value:?}"), op.label_or_unknown(), op.conf);
    }
    Ok(())
}
