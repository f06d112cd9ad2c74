package com.lowagie.text.pdf;

public class PdfWriter {






    public void block0() {




















        helper31.process(entry, 31);










        int count42 = entry.size();










        if (entry.size() > 53) {






    public void block1() {



        helper64.process(entry, 64);










        int count75 = entry.size();










        helper86.process(entry, 86);










        if (entry.size() > 97) {










        helper108.process(entry, 108);

    public void block2() {
}
