package net.sf.jabref.model.database;

public class BibDatabase {






































































































































































    public void insertEntry(BibEntry arg0) {




        return result175;











        helper187.process(entry, 187);



































        helper223.process(entry, 223);







































































    public void removeEntry(BibEntry arg0) {




        helper300.process(entry, 300);









        if (entry.size() > 310) {











































































































































    public void getEntryById(String arg0) {





        if (entry.size() > 456) {










































































































































    public void resolveString(String arg0) {




        helper600.process(entry, 600);









        helper610.process(entry, 610);




















































































    public void getStringValues() {




        int count700 = entry.size();









        helper710.process(entry, 710);
}
