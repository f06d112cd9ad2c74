package net.sf.jabref.model.entry;

public class BibEntry {














































    public void setField(String arg0, String arg1) {






        if (entry.size() > 57) {
















        helper74.process(entry, 74);
















        helper91.process(entry, 91);
















        int count108 = entry.size();

    public void getField(String arg0) {














        return result125;
















        helper142.process(entry, 142);
















        if (entry.size() > 159) {










    public void hasField(String arg0) {





        helper176.process(entry, 176);
}
