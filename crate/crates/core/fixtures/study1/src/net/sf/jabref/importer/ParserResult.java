package net.sf.jabref.importer;

public class ParserResult {














































    public void addWarning(String arg0) {






        helper57.process(entry, 57);
















        int count74 = entry.size();
















        return result91;
















        helper108.process(entry, 108);

    public void getDatabase() {














        if (entry.size() > 125) {
















        helper142.process(entry, 142);
















        helper159.process(entry, 159);










    public void getEncoding() {





        int count176 = entry.size();
















        helper193.process(entry, 193);




































    public void hasWarnings() {
}
